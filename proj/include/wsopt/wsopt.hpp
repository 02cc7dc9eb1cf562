#pragma once

#include "wsopt/core/error.hpp"
#include "wsopt/core/exact_sum.hpp"
#include "wsopt/core/format.hpp"
#include "wsopt/core/hash.hpp"
#include "wsopt/core/parallel.hpp"
#include "wsopt/core/random.hpp"
#include "wsopt/env/geometry.hpp"
#include "wsopt/env/grid_layout.hpp"
#include "wsopt/env/serialize.hpp"
#include "wsopt/env/tabletop_scene.hpp"
#include "wsopt/env/task_graph.hpp"
#include "wsopt/env/trajectory.hpp"
#include "wsopt/env/validate.hpp"
#include "wsopt/eval/compare.hpp"
#include "wsopt/eval/cross_validation.hpp"
#include "wsopt/eval/dataset.hpp"
#include "wsopt/eval/dataset_io.hpp"
#include "wsopt/eval/metrics.hpp"
#include "wsopt/eval/predictors.hpp"
#include "wsopt/eval/protocol.hpp"
#include "wsopt/eval/report.hpp"
#include "wsopt/legibility/goal_models.hpp"
#include "wsopt/legibility/posterior.hpp"
#include "wsopt/legibility/task_objective.hpp"
#include "wsopt/planning/grid_planner.hpp"
#include "wsopt/planning/simulate.hpp"
#include "wsopt/planning/visibility.hpp"
#include "wsopt/prediction/bayes.hpp"
#include "wsopt/prediction/dtw.hpp"
#include "wsopt/prediction/heuristic.hpp"
#include "wsopt/prediction/maxent_irl.hpp"
#include "wsopt/prediction/model_io.hpp"
#include "wsopt/prediction/ts_gaussian.hpp"
#include "wsopt/qd/archive.hpp"
#include "wsopt/qd/differential_evolution.hpp"
#include "wsopt/qd/grid_space.hpp"
#include "wsopt/qd/map_elites.hpp"
#include "wsopt/qd/measures.hpp"
#include "wsopt/qd/nslc.hpp"
#include "wsopt/qd/objectives.hpp"
#include "wsopt/qd/tabletop_space.hpp"
