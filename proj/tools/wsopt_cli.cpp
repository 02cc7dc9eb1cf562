#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wsopt/eval/dataset_io.hpp"
#include "wsopt/wsopt.hpp"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace wsopt;

enum ExitCode { kOk = 0, kConfigError = 2, kHashMismatch = 3, kRuntimeFailure = 4 };

/// Invalid configuration or unresolvable input; exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string domain = "grid";
    int width = 7, height = 7;
    double obstacle_probability = 0.2;
    std::string task_file;
    std::string objective = "legible";
    std::string optimizer = "map-elites";
    std::size_t iterations = 400, init_iterations = 200;
    std::size_t random_samples = 1000, znorm_samples = 200;
    LegibilityConfig legibility;
    bool move_cubes = true, add_barriers = true;
    double beta = 3.0, sigma = 0.02;
    std::size_t n_per_goal = 0; // 0: 40 per goal on grids, 12 on the tabletop
    std::size_t folds = 4, repeats = 3;
    std::vector<double> fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<double> train_fractions; // empty: none on grids, 0.2..1.0 on the tabletop
    std::size_t tsg_k = 50, irl_iterations = 100;
    std::vector<GridSize> sizes = default_grid_sizes();
    std::size_t compare_seeds = 10;
    std::string layout, dataset, model;
    std::uint64_t seed = 0;
    std::string out = "out";
    unsigned jobs = 1;

    bool grid() const { return domain == "grid"; }
    std::size_t samples_per_goal() const { return n_per_goal ? n_per_goal : (grid() ? 40 : 12); }
    std::vector<double> learning_fractions() const {
        if (!train_fractions.empty() || grid()) return train_fractions;
        return {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    }

    /// Every field that can change an output. Input paths enter through
    /// their file hashes, so moving a file keeps the hash.
    json canonical() const {
        json sizes_json = json::array();
        for (const auto& s : sizes) sizes_json.push_back({s.width, s.height});
        auto file_hash = [](const std::string& p) -> std::string {
            if (p.empty()) return "";
            std::ifstream in(p, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            return hash_hex(ss.str());
        };
        return json{{"domain", domain},
                    {"grid", {{"width", width}, {"height", height}, {"obstacle_probability", obstacle_probability}}},
                    {"task", file_hash(task_file)},
                    {"objective", objective},
                    {"optimizer", optimizer},
                    {"budget",
                     {{"iterations", iterations},
                      {"init_iterations", init_iterations},
                      {"random_samples", random_samples},
                      {"znorm_samples", znorm_samples}}},
                    {"legibility", {{"penalty", legibility.penalty}, {"fractions", legibility.fractions}}},
                    {"tabletop", {{"move_cubes", move_cubes}, {"add_barriers", add_barriers}}},
                    {"noise", {{"beta", beta}, {"sigma", sigma}}},
                    {"dataset", {{"n_per_goal", samples_per_goal()}}},
                    {"eval",
                     {{"folds", folds},
                      {"repeats", repeats},
                      {"fractions", fractions},
                      {"train_fractions", learning_fractions()},
                      {"tsg_k", tsg_k},
                      {"irl_iterations", irl_iterations}}},
                    {"compare", {{"sizes", sizes_json}, {"seeds", compare_seeds}}},
                    {"inputs", {{"layout", file_hash(layout)}, {"dataset", file_hash(dataset)}, {"model", file_hash(model)}}},
                    {"seed", seed}};
    }

    std::string hash() const { return hash_hex(canonical().dump()); }
};

/// Reads `key` from `obj` into `dst` and removes it, so leftovers can be
/// reported as unknown.
template <class T>
void take(json& obj, const char* key, T& dst, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        dst = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
    obj.erase(key);
}

json section(json& root, const char* key) {
    if (!root.contains(key)) return json::object();
    json s = root.at(key);
    root.erase(key);
    if (!s.is_object()) throw ConfigError(std::string(key) + ": expected an object");
    return s;
}

void no_leftovers(const json& obj, const std::string& where) {
    if (!obj.empty()) throw ConfigError(where + ": unknown key '" + obj.begin().key() + "'");
}

std::string resolve(const fs::path& base, const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (base / p).string();
}

RunConfig load_config(const std::string& path) {
    RunConfig c;
    if (path.empty()) return c;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
    const fs::path base = fs::path(path).parent_path();
    take(root, "domain", c.domain, "config");
    take(root, "task", c.task_file, "config");
    take(root, "objective", c.objective, "config");
    take(root, "optimizer", c.optimizer, "config");
    json io = section(root, "inputs");
    take(io, "layout", c.layout, "inputs");
    take(io, "dataset", c.dataset, "inputs");
    take(io, "model", c.model, "inputs");
    no_leftovers(io, "inputs");
    take(root, "seed", c.seed, "config");
    take(root, "out", c.out, "config");
    c.task_file = resolve(base, c.task_file);
    c.layout = resolve(base, c.layout);
    c.dataset = resolve(base, c.dataset);
    c.model = resolve(base, c.model);
    if (!c.out.empty() && fs::path(c.out).is_relative()) c.out = resolve(base, c.out);

    json g = section(root, "grid");
    take(g, "width", c.width, "grid");
    take(g, "height", c.height, "grid");
    take(g, "obstacle_probability", c.obstacle_probability, "grid");
    no_leftovers(g, "grid");
    json b = section(root, "budget");
    take(b, "iterations", c.iterations, "budget");
    take(b, "init_iterations", c.init_iterations, "budget");
    take(b, "random_samples", c.random_samples, "budget");
    take(b, "znorm_samples", c.znorm_samples, "budget");
    no_leftovers(b, "budget");
    json l = section(root, "legibility");
    take(l, "penalty", c.legibility.penalty, "legibility");
    take(l, "fractions", c.legibility.fractions, "legibility");
    no_leftovers(l, "legibility");
    json t = section(root, "tabletop");
    take(t, "move_cubes", c.move_cubes, "tabletop");
    take(t, "add_barriers", c.add_barriers, "tabletop");
    no_leftovers(t, "tabletop");
    json n = section(root, "noise");
    take(n, "beta", c.beta, "noise");
    take(n, "sigma", c.sigma, "noise");
    no_leftovers(n, "noise");
    json d = section(root, "dataset");
    take(d, "n_per_goal", c.n_per_goal, "dataset");
    no_leftovers(d, "dataset");
    json e = section(root, "eval");
    take(e, "folds", c.folds, "eval");
    take(e, "repeats", c.repeats, "eval");
    take(e, "fractions", c.fractions, "eval");
    take(e, "train_fractions", c.train_fractions, "eval");
    take(e, "tsg_k", c.tsg_k, "eval");
    take(e, "irl_iterations", c.irl_iterations, "eval");
    no_leftovers(e, "eval");
    json cmp = section(root, "compare");
    if (cmp.contains("sizes")) {
        std::vector<std::vector<int>> raw;
        take(cmp, "sizes", raw, "compare");
        c.sizes.clear();
        for (const auto& s : raw) {
            if (s.size() != 2) throw ConfigError("compare.sizes: expected [width, height] pairs");
            c.sizes.push_back({s[0], s[1]});
        }
    }
    take(cmp, "seeds", c.compare_seeds, "compare");
    no_leftovers(cmp, "compare");
    no_leftovers(root, "config");
    return c;
}

void validate(const RunConfig& c) {
    if (c.domain != "grid" && c.domain != "tabletop") throw ConfigError("domain must be 'grid' or 'tabletop'");
    if (c.init_iterations == 0 || c.iterations < c.init_iterations)
        throw ConfigError("budget: need iterations >= init_iterations >= 1");
    if (c.optimizer != "map-elites" && c.optimizer != "de" && c.optimizer != "nslc")
        throw ConfigError("optimizer must be map-elites, de or nslc");
    if (c.objective != "random-median") {
        try {
            objective_from_name(c.objective);
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
    }
    try {
        c.legibility.check();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("legibility: ") + e.what());
    }
    if (c.width < 3 || c.height < 3) throw ConfigError("grid: width and height must be at least 3");
    if (!(c.obstacle_probability >= 0.0 && c.obstacle_probability < 1.0))
        throw ConfigError("grid: obstacle_probability must lie in [0, 1)");
    if (!(c.beta >= 0.0)) throw ConfigError("noise: beta must be non-negative");
    if (!(c.sigma >= 0.0)) throw ConfigError("noise: sigma must be non-negative");
    if (c.folds < 2 || c.repeats == 0) throw ConfigError("eval: need folds >= 2 and repeats >= 1");
    if (c.fractions.empty()) throw ConfigError("eval: no fractions");
    for (double f : c.fractions)
        if (!(f > 0.0 && f <= 1.0)) throw ConfigError("eval: fractions must lie in (0, 1]");
    for (double f : c.train_fractions)
        if (!(f > 0.0 && f <= 1.0)) throw ConfigError("eval: train_fractions must lie in (0, 1]");
    if (c.tsg_k < 2) throw ConfigError("eval: tsg_k must be at least 2");
    if (c.sizes.empty() || c.compare_seeds == 0) throw ConfigError("compare: need sizes and seeds");
    for (const auto& s : c.sizes)
        if (s.width < 3 || s.height < 3) throw ConfigError("compare: sizes must be at least 3x3");
    if (c.out.empty()) throw ConfigError("no output directory");
}

std::string read_input(const std::string& path, const char* what) {
    if (path.empty()) throw ConfigError(std::string("no ") + what + " given");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(std::string("cannot read ") + what + " " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Output files embed the config hash as a leading comment line (CSV and
/// text) or inside the artifact itself.
class Writer {
public:
    Writer(const RunConfig& c) : dir_(c.out), hash_(c.hash()), seed_(c.seed) { fs::create_directories(dir_); }

    const std::string& hash() const { return hash_; }

    std::string name(const std::string& kind, const std::string& condition, const std::string& ext) const {
        return kind + "-" + condition + "-s" + std::to_string(seed_) + "-" + hash_ + "." + ext;
    }

    void write(const std::string& file, const std::string& body, bool header = true) const {
        const fs::path p = dir_ / file;
        std::ofstream out(p, std::ios::binary);
        if (header) out << "# config " << hash_ << "\n";
        out << body;
        if (!out) throw Error("cannot write " + p.string());
        std::cout << p.string() << "\n";
    }

private:
    fs::path dir_;
    std::string hash_;
    std::uint64_t seed_;
};

TaskGraph load_task(const RunConfig& c) {
    if (!c.task_file.empty()) return parse_task_graph(read_input(c.task_file, "task graph"));
    return c.grid() ? overcooked_task() : tabletop_task();
}

GridSpaceParams grid_params(const RunConfig& c) {
    GridSpaceParams p;
    p.width = c.width;
    p.height = c.height;
    p.obstacle_probability = c.obstacle_probability;
    return p;
}

TabletopSpaceParams tabletop_params(const RunConfig& c) {
    TabletopSpaceParams p;
    p.move_cubes = c.move_cubes;
    p.add_barriers = c.add_barriers;
    p.random_init = c.move_cubes;
    return p;
}

template <class Space>
void run_optimize(const RunConfig& c, const Space& space, const Writer& w) {
    using W = typename Space::Solution;
    const WorkspaceObjective<W> objective(load_task(c), c.legibility);
    const std::string cond = c.objective == "random-median" ? c.objective : c.objective + "-" + c.optimizer;
    std::string summary = "objective " + c.objective + "\n";

    if (c.objective == "random-median") {
        Rng rng = make_rng(c.seed, 1);
        const auto pick = random_median(space, objective.make(ObjectiveKind::legible), c.random_samples, rng, c.jobs);
        std::string csv = "sample,score\n";
        for (std::size_t i = 0; i < pick.scores.size(); ++i)
            csv += std::to_string(i) + "," + fmt_double(pick.scores[i]) + "\n";
        w.write(w.name("samples", cond, "csv"), csv);
        w.write(w.name("layout", cond, "txt"), serialize(pick.solution));
        summary += "samples " + std::to_string(c.random_samples) + "\nscore " + fmt_double(pick.score) +
                   "\nworkspace " + layout_hash(pick.solution) + "\n";
        w.write(w.name("optimize", cond, "txt"), summary);
        return;
    }

    const ObjectiveKind kind = objective_from_name(c.objective);
    ZNorm z;
    if (kind == ObjectiveKind::legible_efficient) {
        Rng zr = make_rng(c.seed, 2);
        z = calibrate_znorm(space, objective, c.znorm_samples, zr, c.jobs);
        summary += "znorm " + fmt_double(z.legibility_mean) + " " + fmt_double(z.legibility_sd) + " " +
                   fmt_double(z.efficiency_mean) + " " + fmt_double(z.efficiency_sd) + "\n";
    }
    const auto f = objective.make(kind, z);
    Rng rng = make_rng(c.seed, 3);
    W best;
    double best_score = 0.0;
    std::size_t evaluations = 0;
    std::string log = "iteration,best,filled\n";
    if (c.optimizer == "map-elites") {
        MapElitesParams p;
        p.iterations = c.iterations;
        p.init_iterations = c.init_iterations;
        p.improve.jobs = c.jobs;
        const auto r = map_elites(space, f, p, rng);
        best = r.best;
        best_score = r.best_score;
        evaluations = r.evaluations;
        for (std::size_t i = 0; i < r.best_log.size(); ++i)
            log += std::to_string(i + 1) + "," + fmt_double(r.best_log[i]) + "," + std::to_string(r.filled_log[i]) + "\n";
        std::string archive = "bin0,bin1,score,workspace\n";
        for (const auto& e : r.archive.elites())
            archive += std::to_string(e.bin[0]) + "," + std::to_string(e.bin[1]) + "," + fmt_double(e.score) + "," +
                       layout_hash(e.solution) + "\n";
        w.write(w.name("archive", cond, "csv"), archive);
    } else {
        // DE and NSLC get the evaluation count MAP-Elites would use at this budget.
        MapElitesParams mp;
        mp.iterations = c.iterations;
        mp.init_iterations = c.init_iterations;
        mp.improve.jobs = c.jobs;
        Rng probe = make_rng(c.seed, 3);
        const std::size_t budget = map_elites(space, f, mp, probe).evaluations;
        auto record = [&](const auto& r) {
            best = r.best;
            best_score = r.best_score;
            evaluations = r.evaluations;
            for (std::size_t i = 0; i < r.best_log.size(); ++i)
                log += std::to_string(i + 1) + "," + fmt_double(r.best_log[i]) + ",\n";
        };
        if (c.optimizer == "de") {
            DEParams p;
            p.max_evaluations = budget;
            p.jobs = c.jobs;
            record(differential_evolution(space, f, p, rng));
        } else {
            NSLCParams p;
            p.max_evaluations = budget;
            p.jobs = c.jobs;
            record(novelty_search_lc(space, f, p, rng));
        }
    }
    w.write(w.name("log", cond, "csv"), log);
    w.write(w.name("layout", cond, "txt"), serialize(best));
    summary += "optimizer " + c.optimizer + "\nevaluations " + std::to_string(evaluations) + "\nscore " +
               fmt_double(best_score) + "\nlegibility " + fmt_double(objective.legibility(best)) + "\nefficiency " +
               fmt_double(objective.efficiency(best)) + "\nworkspace " + layout_hash(best) + "\n";
    w.write(w.name("optimize", cond, "txt"), summary);
}

int cmd_optimize(const RunConfig& c) {
    const Writer w(c);
    if (c.grid())
        run_optimize(c, GridSpace(grid_params(c)), w);
    else
        run_optimize(c, TabletopSpace(tabletop_params(c)), w);
    return kOk;
}

GridLayout load_grid(const RunConfig& c) { return parse_grid_layout(read_input(c.layout, "layout")); }
TabletopScene load_scene(const RunConfig& c) { return parse_tabletop_scene(read_input(c.layout, "layout")); }

int cmd_simulate(const RunConfig& c) {
    const Writer w(c);
    const TaskGraph task = load_task(c);
    std::string body;
    if (c.grid()) {
        const GridLayout g = load_grid(c);
        GridAgentParams agent;
        agent.beta = c.beta;
        body = serialize_dataset(generate_dataset(g, task, c.samples_per_goal(), agent, c.seed), layout_hash(g));
    } else {
        const TabletopScene s = load_scene(c);
        ReachNoise noise;
        noise.sigma = c.sigma;
        body = serialize_dataset(generate_dataset(s, task, c.samples_per_goal(), noise, c.seed), layout_hash(s));
    }
    w.write(w.name("dataset", c.domain, "txt"), body);
    return kOk;
}

IrlTrainerParams irl_params(const RunConfig& c) {
    IrlTrainerParams p;
    p.irl.max_iterations = c.irl_iterations;
    return p;
}

int cmd_train(const RunConfig& c) {
    const Writer w(c);
    std::string body;
    if (c.grid()) {
        const GridLayout g = load_grid(c);
        const auto data = parse_dataset<GridPos>(read_input(c.dataset, "dataset"), layout_hash(g));
        std::vector<std::vector<GridPos>> demos;
        std::size_t longest = 0;
        for (const auto& t : data) {
            demos.push_back(t.points);
            longest = std::max(longest, t.points.size() - 1);
        }
        IrlParams p = irl_params(c).irl;
        p.horizon = std::max(default_horizon(g), longest);
        const IrlResult r = maxent_irl_fit(g, demos, p);
        body = serialize_model(r.model, layout_hash(g));
    } else {
        const TabletopScene s = load_scene(c);
        const auto data = parse_dataset<Vec2>(read_input(c.dataset, "dataset"), layout_hash(s));
        body = serialize_model(fit_tsg(data, {c.tsg_k, 1e-6}), layout_hash(s));
    }
    w.write(w.name("model", c.domain, "txt"), body);
    return kOk;
}

template <class Point>
ConditionReport evaluate_condition(const RunConfig& c, const Dataset<Point>& data, const std::string& workspace,
                                   const std::vector<std::pair<std::string, TrainFn<Point>>>& predictors,
                                   const FoldAssignment& folds) {
    ConditionReport r;
    r.condition = c.domain;
    r.workspace_hash = workspace;
    r.samples = data.size();
    for (const auto& [name, train] : predictors)
        r.predictors.push_back({name, accuracy_vs_fraction(data, folds, train, c.fractions, c.jobs)});
    return r;
}

int cmd_evaluate(const RunConfig& c) {
    const Writer w(c);
    EvalReport report;
    report.config_hash = w.hash();
    report.seed = c.seed;
    report.folds = c.folds;
    report.repeats = c.repeats;
    if (c.grid()) {
        const GridLayout g = load_grid(c);
        const std::string h = layout_hash(g);
        parse_irl_model(read_input(c.model, "model"), h);
        const auto data = parse_dataset<GridPos>(read_input(c.dataset, "dataset"), h);
        const auto folds = stratified_kfold(labels(data), c.folds, c.repeats, derive_seed(c.seed, 1));
        report.conditions.push_back(evaluate_condition<GridPos>(
            c, data, h,
            {{"irl-bayes", irl_bayes_trainer(g, irl_params(c))},
             {"unit-bayes", unit_bayes_trainer(g)},
             {"heuristic", heuristic_trainer(g)}},
            folds));
        if (!c.train_fractions.empty())
            report.conditions.back().learning = learning_curve(data, folds, irl_bayes_trainer(g, irl_params(c)),
                                                               c.train_fractions, c.fractions, derive_seed(c.seed, 2), c.jobs);
    } else {
        const TabletopScene s = load_scene(c);
        const std::string h = layout_hash(s);
        const TimeSeriesGaussian model = parse_tsg_model(read_input(c.model, "model"), h);
        const auto data = parse_dataset<Vec2>(read_input(c.dataset, "dataset"), h);
        const auto folds = stratified_kfold(labels(data), c.folds, c.repeats, derive_seed(c.seed, 1));
        const TsgTrainerParams tp{c.tsg_k, 1e-6};
        report.conditions.push_back(evaluate_condition<Vec2>(
            c, data, h, {{"tsg", tsg_trainer(tp)}, {"heuristic", heuristic_trainer(s)}}, folds));
        report.conditions.back().covariance = covariance_stats(model);
        const auto tf = c.learning_fractions();
        if (!tf.empty())
            report.conditions.back().learning =
                learning_curve(data, folds, tsg_trainer(tp), tf, c.fractions, derive_seed(c.seed, 2), c.jobs);
    }
    w.write(w.name("accuracy", c.domain, "csv"), accuracy_csv(report), false);
    w.write(w.name("report", c.domain, "txt"), summary_text(report), false);
    if (report.conditions.back().learning) w.write(w.name("learning", c.domain, "csv"), learning_csv(report), false);
    return kOk;
}

int cmd_compare(const RunConfig& c) {
    if (!c.grid()) throw ConfigError("compare-optimizers runs on grid layouts");
    const Writer w(c);
    CompareParams p;
    p.init_iterations = c.init_iterations;
    p.iterations = c.iterations;
    p.space = grid_params(c);
    p.legibility = c.legibility;
    p.jobs = c.jobs;
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < c.compare_seeds; ++i) seeds.push_back(c.seed + i);
    const CompareReport r = compare_optimizers(c.sizes, seeds, load_task(c), p);
    w.write(w.name("compare", "grid", "csv"), compare_csv(r, w.hash()), false);
    w.write(w.name("table", "grid", "txt"), compare_table(r, w.hash()), false);
    return kOk;
}

/// Top-down raster at 1 cm: '.' free table, digits cube ids, '=' barriers.
std::string render_scene(const TabletopScene& s) {
    const int cols = static_cast<int>(std::lround((s.bounds.max_x - s.bounds.min_x) * 100.0));
    const int rows = static_cast<int>(std::lround((s.bounds.max_y - s.bounds.min_y) * 100.0));
    std::string out;
    for (int r = rows - 1; r >= 0; --r) {
        for (int col = 0; col < cols; ++col) {
            const Vec2 p{s.bounds.min_x + (col + 0.5) / 100.0, s.bounds.min_y + (r + 0.5) / 100.0};
            char ch = '.';
            for (const Barrier& b : s.barriers)
                if (b.rect().contains(p)) ch = '=';
            for (const Cube& cube : s.cubes)
                if (std::fabs(p.x - cube.position.x) <= s.cube_footprint / 2 &&
                    std::fabs(p.y - cube.position.y) <= s.cube_footprint / 2)
                    ch = static_cast<char>('0' + cube.id % 10);
            if (distance(p, s.hand_start) < 0.01) ch = 'H';
            out += ch;
        }
        out += '\n';
    }
    return out;
}

int cmd_render(const RunConfig& c) {
    const Writer w(c);
    if (c.grid()) {
        const GridLayout g = load_grid(c);
        w.write(w.name("render", layout_hash(g), "txt"), render_ascii(g));
    } else {
        const TabletopScene s = load_scene(c);
        w.write(w.name("render", layout_hash(s), "txt"), render_scene(s));
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Workspace legibility optimization and goal prediction"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, out, layout, dataset, model;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    app.add_option("--config", config_path, "JSON run configuration");
    auto* seed_opt = app.add_option("--seed", seed, "global seed (overrides WSOPT_SEED and the config)");
    auto* out_opt = app.add_option("--out", out, "output directory (overrides WSOPT_OUT and the config)");
    app.add_option("--jobs", jobs, "worker threads; never changes outputs")->check(CLI::PositiveNumber);
    app.add_option("--layout", layout, "layout or scene file");
    app.add_option("--dataset", dataset, "dataset file");
    app.add_option("--model", model, "model file");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"optimize", "optimize a workspace and write it with its archive and log"},
        {"simulate-humans", "simulate a labelled trajectory dataset in a workspace"},
        {"train-predictor", "fit the goal predictor on a dataset"},
        {"evaluate", "cross-validated accuracy report for a workspace and dataset"},
        {"compare-optimizers", "MAP-Elites, NSLC and DE over several grid sizes"},
        {"render", "text rendering of a workspace"}};
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    RunConfig c;
    try {
        c = load_config(config_path);
        if (const char* env = std::getenv("WSOPT_SEED"); env && !seed_opt->count()) {
            const auto v = parse_int(env);
            if (!v || *v < 0) throw ConfigError("WSOPT_SEED must be a non-negative integer");
            c.seed = static_cast<std::uint64_t>(*v);
        }
        if (const char* env = std::getenv("WSOPT_OUT"); env && !out_opt->count()) c.out = env;
        if (seed_opt->count()) c.seed = seed;
        if (out_opt->count()) c.out = out;
        if (!layout.empty()) c.layout = layout;
        if (!dataset.empty()) c.dataset = dataset;
        if (!model.empty()) c.model = model;
        c.jobs = jobs;
        validate(c);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "optimize") return cmd_optimize(c);
        if (cmd == "simulate-humans") return cmd_simulate(c);
        if (cmd == "train-predictor") return cmd_train(c);
        if (cmd == "evaluate") return cmd_evaluate(c);
        if (cmd == "compare-optimizers") return cmd_compare(c);
        return cmd_render(c);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kConfigError;
    } catch (const HashMismatch& e) {
        std::cerr << "hash mismatch: " << e.what() << "\n";
        return kHashMismatch;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return kRuntimeFailure;
    }
}
