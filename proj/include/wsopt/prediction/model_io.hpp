#pragma once

#include <string>
#include <string_view>

#include "wsopt/core/error.hpp"
#include "wsopt/core/format.hpp"
#include "wsopt/env/serialize.hpp"
#include "wsopt/prediction/maxent_irl.hpp"
#include "wsopt/prediction/ts_gaussian.hpp"

namespace wsopt {

// Model files are line-oriented text: a versioned magic line, the hash of
// the layout or scene the model was fitted on, then the parameters.

inline std::string serialize_model(const LinearCostModel& m, const std::string& layout_hash_hex) {
    std::string out = "wsopt-irl v1\nlayout " + layout_hash_hex + "\nsize " + std::to_string(m.width()) + " " +
                      std::to_string(m.height()) + "\ntheta";
    for (double v : m.theta()) out += " " + fmt_double(v);
    return out + "\nend\n";
}

inline std::string serialize_model(const TimeSeriesGaussian& m, const std::string& scene_hash_hex) {
    std::string out = "wsopt-tsg v1\nscene " + scene_hash_hex + "\nk " + std::to_string(m.k()) + "\n";
    for (const auto& [g, gm] : m.goals()) {
        out += "goal " + std::to_string(g) + "\n";
        for (std::size_t t = 0; t < m.k(); ++t) {
            const Gaussian2& s = gm.steps[t];
            out += "step " + fmt_double(gm.reference[t].x) + " " + fmt_double(gm.reference[t].y) + " " +
                   fmt_double(s.mean.x) + " " + fmt_double(s.mean.y) + " " + fmt_double(s.sxx) + " " +
                   fmt_double(s.sxy) + " " + fmt_double(s.syy) + "\n";
        }
    }
    return out + "end\n";
}

namespace detail {

inline void check_hash(const std::string& stored, const std::string& expected) {
    if (stored != expected)
        throw HashMismatch("model was fitted on " + stored + " but is being used with " + expected);
}

} // namespace detail

/// Parses an IRL model; throws HashMismatch unless it was fitted on a
/// layout with the given hash.
inline LinearCostModel parse_irl_model(std::string_view text, const std::string& expected_hash) {
    detail::LineReader r(text);
    r.expect_header("wsopt-irl");
    auto toks = r.next();
    if (toks.size() != 2 || toks[0] != "layout") r.fail("layout", "expected 'layout <hash>'");
    detail::check_hash(toks[1], expected_hash);
    toks = r.next();
    if (toks.empty() || toks[0] != "size") r.fail("size", "expected 'size <width> <height>'");
    r.expect_arity(toks, 3);
    const int w = r.integer(toks[1], "width"), h = r.integer(toks[2], "height");
    if (w <= 0 || h <= 0) r.fail("size", "dimensions must be positive");
    toks = r.next();
    if (toks.empty() || toks[0] != "theta") r.fail("theta", "expected 'theta <values>'");
    r.expect_arity(toks, static_cast<std::size_t>(w * h) + 1);
    std::vector<double> theta;
    for (std::size_t i = 1; i < toks.size(); ++i) theta.push_back(r.number(toks[i], "theta"));
    toks = r.next();
    if (toks.size() != 1 || toks[0] != "end") r.fail("end", "expected 'end'");
    try {
        return LinearCostModel(w, h, std::move(theta));
    } catch (const InvalidArgument& e) {
        r.fail("theta", e.what());
    }
}

inline TimeSeriesGaussian parse_tsg_model(std::string_view text, const std::string& expected_hash) {
    detail::LineReader r(text);
    r.expect_header("wsopt-tsg");
    auto toks = r.next();
    if (toks.size() != 2 || toks[0] != "scene") r.fail("scene", "expected 'scene <hash>'");
    detail::check_hash(toks[1], expected_hash);
    toks = r.next();
    if (toks.empty() || toks[0] != "k") r.fail("k", "expected 'k <steps>'");
    r.expect_arity(toks, 2);
    const int k = r.integer(toks[1], "k");
    if (k < 2) r.fail("k", "K must be at least 2");
    std::map<GoalId, TimeSeriesGaussian::GoalModel> goals;
    while (true) {
        toks = r.next();
        if (toks.empty()) r.fail("end", "unexpected end of file");
        if (toks[0] == "end") break;
        if (toks[0] != "goal") r.fail(toks[0], "expected 'goal <id>' or 'end'");
        r.expect_arity(toks, 2);
        const GoalId g = r.integer(toks[1], "goal");
        TimeSeriesGaussian::GoalModel m;
        for (int t = 0; t < k; ++t) {
            toks = r.next();
            if (toks.empty() || toks[0] != "step") r.fail("step", "expected " + std::to_string(k) + " step lines");
            r.expect_arity(toks, 8);
            double v[7];
            for (int i = 0; i < 7; ++i) v[i] = r.number(toks[static_cast<std::size_t>(i) + 1], "step");
            m.reference.push_back({v[0], v[1]});
            m.steps.push_back({{v[2], v[3]}, v[4], v[5], v[6]});
            if (!(m.steps.back().det() > 0.0) || !(v[4] > 0.0)) r.fail("step", "covariance is not positive definite");
        }
        if (!goals.emplace(g, std::move(m)).second) r.fail("goal", "duplicate goal " + std::to_string(g));
    }
    return TimeSeriesGaussian(static_cast<std::size_t>(k), std::move(goals));
}

} // namespace wsopt
