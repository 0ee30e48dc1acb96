#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "entanglement.hpp"
#include "units.hpp"

namespace cavent {

inline constexpr const char* version = "0.3.1";

enum class Spacing { linear, log };

struct Axis {
    std::string key;
    double min = 0, max = 1;
    int count = 2;
    Spacing spacing = Spacing::linear;

    std::vector<double> values() const
    {
        std::vector<double> v(count);
        for (int i = 0; i < count; ++i) {
            const double t = double(i) / (count - 1);
            if (spacing == Spacing::linear)
                v[i] = min + t * (max - min);
            else
                v[i] = std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
        }
        if (count > 1) {
            v.front() = min;
            v.back() = max;
        }
        return v;
    }
};

// target = scale * source + offset (+ value of offset_key when set)
struct Tie {
    std::string target, source;
    double scale = 1.0, offset = 0.0;
    std::string offset_key;
};

struct SweepSpec {
    std::string name = "custom";
    std::vector<Axis> axes;
    RunConfig fixed;
    std::vector<Tie> ties;
};

inline void validate(const SweepSpec& s)
{
    if (s.axes.empty() || s.axes.size() > 2) throw ConfigError("axes", "need one or two axes");
    for (auto& a : s.axes) {
        if (!is_numeric_key(a.key)) throw ConfigError(a.key, "axis must be a numeric config key");
        if (a.count < 2) throw ConfigError(a.key, "axis count must be >= 2");
        if (!(std::isfinite(a.min) && std::isfinite(a.max))) throw ConfigError(a.key, "axis range not finite");
        if (a.spacing == Spacing::log && !(a.min > 0 && a.max > 0))
            throw ConfigError(a.key, "log axis needs positive range");
    }
    if (s.axes.size() == 2 && s.axes[0].key == s.axes[1].key) throw ConfigError(s.axes[1].key, "duplicate axis");
    for (auto& t : s.ties) {
        if (!is_numeric_key(t.target)) throw ConfigError(t.target, "tie target must be numeric");
        if (!is_numeric_key(t.source)) throw ConfigError(t.source, "tie source must be numeric");
        if (!t.offset_key.empty() && !is_numeric_key(t.offset_key)) throw ConfigError(t.offset_key, "not numeric");
        for (auto& a : s.axes)
            if (a.key == t.target) throw ConfigError(t.target, "tie target is also an axis");
    }
    validate(s.fixed);
}

inline std::size_t grid_size(const SweepSpec& s)
{
    std::size_t n = 1;
    for (auto& a : s.axes) n *= a.count;
    return n;
}

// row-major over axes: the last axis varies fastest
inline std::vector<double> axis_point(const SweepSpec& s, std::size_t idx)
{
    std::vector<double> out(s.axes.size());
    for (std::size_t k = s.axes.size(); k-- > 0;) {
        const auto& a = s.axes[k];
        out[k] = a.values()[idx % a.count];
        idx /= a.count;
    }
    return out;
}

inline RunConfig point_config(const SweepSpec& s, const std::vector<double>& at)
{
    RunConfig c = s.fixed;
    for (std::size_t k = 0; k < s.axes.size(); ++k) set_value(c, s.axes[k].key, at[k]);
    for (auto& t : s.ties) {
        double v = t.scale * get_value(c, t.source) + t.offset;
        if (!t.offset_key.empty()) v += get_value(c, t.offset_key);
        set_value(c, t.target, v);
    }
    return finalize(c);
}

struct SweepRow {
    std::vector<double> axes;
    double S = NAN, born_ratio = NAN, tau_coh = NAN;
    long skipped_nodes = 0;
    std::string error;   // empty on success
    PointResult point;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
    double wall_time_s = 0;
    double t_light = 0;   // |d1 - d2| of the fixed config, c = 1
};

inline SweepRow evaluate_row(const SweepSpec& s, std::size_t idx)
{
    SweepRow row;
    row.axes = axis_point(s, idx);
    try {
        const RunConfig c = point_config(s, row.axes);
        const double g = c.layer1.sigma.imag();
        row.tau_coh = g > 0 ? 1.0 / g : INFINITY;
        row.point = entropy_at(c);
        row.S = row.point.S;
        row.born_ratio = row.point.born_ratio;
        row.skipped_nodes = row.point.diag.skipped;
    } catch (const SingularPropagator&) {
        row.error = "singular_propagator";
    } catch (const ZeroState&) {
        row.error = "zero_state";
    } catch (const ConfigError&) {
        row.error = "invalid_config";
    } catch (const std::exception&) {
        row.error = "error";
    }
    if (!row.error.empty()) {
        row.S = row.born_ratio = NAN;
    }
    return row;
}

inline SweepResult run_sweep(const SweepSpec& spec, int workers = 1)
{
    validate(spec);
    const auto t0 = std::chrono::steady_clock::now();
    SweepResult res;
    res.spec = spec;
    res.t_light = std::abs(spec.fixed.layer1.d - spec.fixed.layer2.d);
    const std::size_t n = grid_size(spec);
    res.rows.resize(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) res.rows[i] = evaluate_row(spec, i);
    };
    workers = std::max(1, std::min<int>(workers, int(n)));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

struct TauAxis {
    std::vector<double> sigma_im, tau;
    double t_light = 0;
};

inline TauAxis tau_axis(const SweepResult& r)
{
    const auto& ax = r.spec.axes;
    if (ax.size() != 1 || (ax[0].key != "sigma1_im_eV" && ax[0].key != "sigma2_im_eV"))
        throw ConfigError("axes", "tau axis needs a one-axis sweep over sigma_im");
    TauAxis t;
    t.t_light = r.t_light;
    for (auto& row : r.rows) {
        t.sigma_im.push_back(row.axes[0]);
        t.tau.push_back(row.axes[0] > 0 ? 1.0 / row.axes[0] : INFINITY);
    }
    return t;
}

inline void write_csv(const SweepResult& r, std::ostream& os)
{
    using detail::fmt17;
    const auto& s = r.spec;
    os << "# sweep=" << s.name << "\n";
    os << "# version=" << version << "\n";
    for (std::size_t k = 0; k < s.axes.size(); ++k) {
        const auto& a = s.axes[k];
        os << "# axis" << k + 1 << "=" << a.key << "\n";
        os << "# axis" << k + 1 << "_range=" << fmt17(a.min) << ":" << fmt17(a.max) << ":" << a.count << ":"
           << (a.spacing == Spacing::log ? "log" : "linear") << "\n";
    }
    for (auto& t : s.ties) {
        os << "# tie=" << t.target << "=" << fmt17(t.scale) << "*" << t.source << "+" << fmt17(t.offset);
        if (!t.offset_key.empty()) os << "+" << t.offset_key;
        os << "\n";
    }
    os << "# t_light=" << fmt17(r.t_light) << "\n";
    os << serialize_config(s.fixed, "# ");
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        if (!r.rows[i].error.empty()) os << "# error_row=" << i << " code=" << r.rows[i].error << "\n";
    os << (s.axes.size() == 2 ? "axis1,axis2," : "axis1,") << "S,born_ratio,tau_coh,skipped_nodes\n";
    for (auto& row : r.rows) {
        for (double v : row.axes) os << fmt17(v) << ",";
        os << fmt17(row.S) << "," << fmt17(row.born_ratio) << "," << fmt17(row.tau_coh) << ","
           << row.skipped_nodes << "\n";
    }
}

// named presets; count <= 0 keeps the default resolution
inline std::vector<std::string> preset_names()
{
    return {"dplane", "dplane_n5", "dplane_n10", "dplane_n20", "dplane_n50", "dcut", "sigmaplane",
            "sigmadiag", "tauscan", "pplane", "pcuts_p1mid", "pcuts_p2mid"};
}

inline std::string preset_description(const std::string& name)
{
    if (name == "dplane") return "S over (d1, d2) in [0, L]^2";
    if (name.rfind("dplane_n", 0) == 0) return "S over (d1, d2) with n_max = " + name.substr(8);
    if (name == "dcut") return "S over d1 in [0, L] with d2 = L - d1";
    if (name == "sigmaplane") return "S over (Re S1, Re S2), log [1e-5, 1e-1] eV";
    if (name == "sigmadiag") return "S over Re S1 = Re S2, log [1e-5, 1e-1] eV";
    if (name == "tauscan") return "S over Im S1 = Im S2, log [1e-6, 1e3] eV (tau = 1/Im S)";
    if (name == "pplane") return "S over (p1, p2) in [0, 0.2]^2 eV";
    if (name == "pcuts_p1mid") return "S over p2 in [0, 0.2] eV at p1 = 0.10 eV";
    if (name == "pcuts_p2mid") return "S over p1 in [0, 0.2] eV at p2 = 0.10 eV";
    return "";
}

inline SweepSpec preset(const std::string& name, const RunConfig& base = RunConfig{}, int count = 0)
{
    const int n2 = count > 0 ? count : 64, n1 = count > 0 ? count : 256;
    const double L = base.cavity.length_L;
    SweepSpec s;
    s.name = name;
    s.fixed = base;
    if (name == "dplane" || name.rfind("dplane_n", 0) == 0) {
        if (name != "dplane") s.fixed.cavity.n_max = std::stoi(name.substr(8));
        s.axes = {{"d1_inv_eV", 0.0, L, n2}, {"d2_inv_eV", 0.0, L, n2}};
    } else if (name == "dcut") {
        s.axes = {{"d1_inv_eV", 0.0, L, n1}};
        s.ties = {{"d2_inv_eV", "d1_inv_eV", -1.0, 0.0, "L_inv_eV"}};
    } else if (name == "sigmaplane") {
        s.axes = {{"sigma1_re_eV", 1e-5, 1e-1, n2, Spacing::log}, {"sigma2_re_eV", 1e-5, 1e-1, n2, Spacing::log}};
    } else if (name == "sigmadiag") {
        s.axes = {{"sigma1_re_eV", 1e-5, 1e-1, n1, Spacing::log}};
        s.ties = {{"sigma2_re_eV", "sigma1_re_eV"}};
    } else if (name == "tauscan") {
        s.axes = {{"sigma1_im_eV", 1e-6, 1e3, n1, Spacing::log}};
        s.ties = {{"sigma2_im_eV", "sigma1_im_eV"}};
    } else if (name == "pplane") {
        s.axes = {{"p1_eV", 0.0, 0.2, n2}, {"p2_eV", 0.0, 0.2, n2}};
    } else if (name == "pcuts_p1mid") {
        s.fixed.kin.p1 = 0.10;
        s.axes = {{"p2_eV", 0.0, 0.2, n1}};
    } else if (name == "pcuts_p2mid") {
        s.fixed.kin.p2 = 0.10;
        s.axes = {{"p1_eV", 0.0, 0.2, n1}};
    } else {
        throw ConfigError("preset", "unknown preset '" + name + "'");
    }
    validate(s);
    return s;
}

struct ContourPoint {
    double x, y;
};

struct Segment {
    ContourPoint a, b;
};

// marching squares for born_ratio = level; log axes are interpolated in log space
inline std::vector<Segment> born_contour(const SweepResult& r, double level = 1.0)
{
    std::vector<Segment> out;
    const auto& ax = r.spec.axes;
    if (ax.size() != 2) return out;
    const int nx = ax[0].count, ny = ax[1].count;
    if (int(r.rows.size()) != nx * ny) return out;
    auto fwd = [](const Axis& a, double v) { return a.spacing == Spacing::log ? std::log(v) : v; };
    auto back = [](const Axis& a, double v) { return a.spacing == Spacing::log ? std::exp(v) : v; };
    const auto xs = ax[0].values(), ys = ax[1].values();
    auto z = [&](int i, int j) { return r.rows[std::size_t(i) * ny + j].born_ratio; };
    for (int i = 0; i + 1 < nx; ++i)
        for (int j = 0; j + 1 < ny; ++j) {
            const int ci[4] = {i, i + 1, i + 1, i}, cj[4] = {j, j, j + 1, j + 1};
            double v[4];
            bool bad = false;
            for (int k = 0; k < 4; ++k) {
                v[k] = z(ci[k], cj[k]);
                if (std::isnan(v[k])) bad = true;
            }
            if (bad) continue;
            bool up[4];
            int nup = 0;
            for (int k = 0; k < 4; ++k) nup += (up[k] = v[k] >= level);
            if (nup == 0 || nup == 4) continue;
            // crossing point on edge k (corner k to corner k+1)
            auto cross = [&](int k) {
                const int k2 = (k + 1) % 4;
                const double t = (level - v[k]) / (v[k2] - v[k]);
                const double x0 = fwd(ax[0], xs[ci[k]]), x1 = fwd(ax[0], xs[ci[k2]]);
                const double y0 = fwd(ax[1], ys[cj[k]]), y1 = fwd(ax[1], ys[cj[k2]]);
                return ContourPoint{back(ax[0], x0 + t * (x1 - x0)), back(ax[1], y0 + t * (y1 - y0))};
            };
            std::vector<int> edges;
            for (int k = 0; k < 4; ++k)
                if (up[k] != up[(k + 1) % 4]) edges.push_back(k);
            if (edges.size() == 2) {
                out.push_back({cross(edges[0]), cross(edges[1])});
            } else {
                // saddle: cut off the corners lying on the other side of the centre
                const bool cup = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= level;
                for (int k = 0; k < 4; ++k)
                    if (up[k] != cup) out.push_back({cross((k + 3) % 4), cross(k)});
            }
        }
    return out;
}

} // namespace cavent
