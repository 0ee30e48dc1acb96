#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavent {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

struct PhysicalConstants {
    double hbar_c = 197.3269804;   // eV nm
    double c_si = 299792458.0;     // m/s
};

inline constexpr PhysicalConstants constants{};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }
private:
    std::string field_;
};

struct LayerParams {
    double lambda_so = 3.9e-3;     // eV
    double v_fermi = 5.5e5;        // m/s
    double d = 0.9;                // eV^-1
    cplx sigma{4.2e-3, 1e-6};      // eV

    bool operator==(const LayerParams&) const = default;
};

struct CavityParams {
    double length_L = 2.0;         // eV^-1
    int n_max = 50;
    double coupling = 0.0917;
    double epsilon_reg = 1e-9;     // eV^2

    bool operator==(const CavityParams&) const = default;
};

struct Kinematics {
    double p1 = 0.13, p2 = 0.12;   // eV
    double phi1 = 0.0, phi2 = 0.0;

    bool operator==(const Kinematics&) const = default;
};

struct QuadratureParams {
    int n_phi = 512;
    double degeneracy_tol = 1e-10;

    bool operator==(const QuadratureParams&) const = default;
};

// published: formulas as printed (root with fixed sign pattern, closed-form vertex)
// consistent: exact root of F and the explicit gamma-matrix vertex
enum class KernelConvention { published, consistent };
enum class ChannelWeighting { equal, ee_doubled, random_phase };
enum class LogBase { natural, two };

struct RunConfig {
    LayerParams layer1;
    LayerParams layer2{3.9e-3, 5.5e5, 1.1, {4.2e-3, 1e-6}};
    CavityParams cavity;
    Kinematics kin;
    QuadratureParams quad;
    KernelConvention convention = KernelConvention::published;
    ChannelWeighting weighting = ChannelWeighting::equal;
    unsigned long weight_seed = 12345;
    LogBase log_base = LogBase::natural;

    bool operator==(const RunConfig&) const = default;
};

inline double derived_mass(const LayerParams& layer, const PhysicalConstants& c = constants)
{
    if (!(layer.v_fermi > 0.0))
        throw std::invalid_argument("v_fermi must be positive");
    return layer.lambda_so * c.c_si / layer.v_fermi;
}

// angle wrapped into (-pi, pi]
inline double wrap_angle(double a)
{
    if (a > -pi && a <= pi) return a;
    double r = std::remainder(a, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

namespace detail {

inline std::string fmt17(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "not a number: '" + v + "'");
    }
}

inline long parse_int(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "not an integer: '" + v + "'");
    }
}

struct Field {
    std::string key;
    bool numeric;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<double(const RunConfig&)> get_num;
    std::function<void(RunConfig&, double)> set_num;
};


template <class Acc>
Field num_field(std::string key, Acc acc)
{
    Field f;
    f.key = key;
    f.numeric = true;
    f.get_num = [acc](const RunConfig& c) { return acc(const_cast<RunConfig&>(c)); };
    f.set_num = [acc](RunConfig& c, double x) { acc(c) = x; };
    f.get = [acc](const RunConfig& c) { return fmt17(acc(const_cast<RunConfig&>(c))); };
    f.set = [acc, key](RunConfig& c, const std::string& v) { acc(c) = parse_double(key, v); };
    return f;
}

template <class Acc>
Field complex_part(std::string key, Acc acc, bool imag)
{
    Field f;
    f.key = key;
    f.numeric = true;
    f.get_num = [acc, imag](const RunConfig& c) {
        cplx z = acc(const_cast<RunConfig&>(c));
        return imag ? z.imag() : z.real();
    };
    f.set_num = [acc, imag](RunConfig& c, double x) {
        cplx& z = acc(c);
        z = imag ? cplx(z.real(), x) : cplx(x, z.imag());
    };
    f.get = [g = f.get_num](const RunConfig& c) { return fmt17(g(c)); };
    f.set = [s = f.set_num, key](RunConfig& c, const std::string& v) { s(c, parse_double(key, v)); };
    return f;
}

template <class Acc>
Field int_field(std::string key, Acc acc)
{
    Field f;
    f.key = key;
    f.numeric = true;
    f.get_num = [acc](const RunConfig& c) { return double(acc(const_cast<RunConfig&>(c))); };
    f.set_num = [acc, key](RunConfig& c, double x) {
        if (x != std::floor(x) || std::abs(x) > 2e9) throw ConfigError(key, "not an integer");
        acc(c) = static_cast<std::remove_reference_t<decltype(acc(c))>>(x);
    };
    f.get = [acc](const RunConfig& c) { return std::to_string(acc(const_cast<RunConfig&>(c))); };
    f.set = [acc, key](RunConfig& c, const std::string& v) {
        acc(c) = static_cast<std::remove_reference_t<decltype(acc(c))>>(parse_int(key, v));
    };
    return f;
}

template <class E>
Field enum_field(std::string key, E RunConfig::*mem, std::vector<std::pair<std::string, E>> names)
{
    Field f;
    f.key = key;
    f.numeric = false;
    f.get = [mem, names](const RunConfig& c) {
        for (auto& [n, e] : names)
            if (e == c.*mem) return n;
        return std::string("?");
    };
    f.set = [mem, names, key](RunConfig& c, const std::string& v) {
        for (auto& [n, e] : names)
            if (n == v) { c.*mem = e; return; }
        std::string all;
        for (auto& [n, e] : names) all += (all.empty() ? "" : "|") + n;
        throw ConfigError(key, "expected one of " + all + ", got '" + v + "'");
    };
    return f;
}

inline const std::vector<Field>& fields()
{
    static const std::vector<Field> table = [] {
        std::vector<Field> t;
        t.push_back(num_field("lambda_so_eV", [](RunConfig& c) -> double& { return c.layer1.lambda_so; }));
        t.push_back(num_field("v_fermi_m_per_s", [](RunConfig& c) -> double& { return c.layer1.v_fermi; }));
        t.push_back(num_field("lambda_so2_eV", [](RunConfig& c) -> double& { return c.layer2.lambda_so; }));
        t.push_back(num_field("v_fermi2_m_per_s", [](RunConfig& c) -> double& { return c.layer2.v_fermi; }));
        t.push_back(num_field("L_inv_eV", [](RunConfig& c) -> double& { return c.cavity.length_L; }));
        t.push_back(num_field("d1_inv_eV", [](RunConfig& c) -> double& { return c.layer1.d; }));
        t.push_back(num_field("d2_inv_eV", [](RunConfig& c) -> double& { return c.layer2.d; }));
        auto s1 = [](RunConfig& c) -> cplx& { return c.layer1.sigma; };
        auto s2 = [](RunConfig& c) -> cplx& { return c.layer2.sigma; };
        t.push_back(complex_part("sigma1_re_eV", s1, false));
        t.push_back(complex_part("sigma1_im_eV", s1, true));
        t.push_back(complex_part("sigma2_re_eV", s2, false));
        t.push_back(complex_part("sigma2_im_eV", s2, true));
        t.push_back(num_field("p1_eV", [](RunConfig& c) -> double& { return c.kin.p1; }));
        t.push_back(num_field("p2_eV", [](RunConfig& c) -> double& { return c.kin.p2; }));
        t.push_back(num_field("phi1_rad", [](RunConfig& c) -> double& { return c.kin.phi1; }));
        t.push_back(num_field("phi2_rad", [](RunConfig& c) -> double& { return c.kin.phi2; }));
        t.push_back(int_field("n_max", [](RunConfig& c) -> int& { return c.cavity.n_max; }));
        t.push_back(int_field("n_phi", [](RunConfig& c) -> int& { return c.quad.n_phi; }));
        t.push_back(num_field("coupling", [](RunConfig& c) -> double& { return c.cavity.coupling; }));
        t.push_back(num_field("epsilon_reg", [](RunConfig& c) -> double& { return c.cavity.epsilon_reg; }));
        t.push_back(num_field("degeneracy_tol", [](RunConfig& c) -> double& { return c.quad.degeneracy_tol; }));
        t.push_back(enum_field<KernelConvention>("kernel_convention", &RunConfig::convention,
            {{"published", KernelConvention::published}, {"consistent", KernelConvention::consistent}}));
        t.push_back(enum_field<ChannelWeighting>("channel_weights", &RunConfig::weighting,
            {{"equal", ChannelWeighting::equal}, {"ee_doubled", ChannelWeighting::ee_doubled},
             {"random_phase", ChannelWeighting::random_phase}}));
        t.push_back(int_field("weight_seed", [](RunConfig& c) -> unsigned long& { return c.weight_seed; }));
        t.push_back(enum_field<LogBase>("entropy_base", &RunConfig::log_base,
            {{"e", LogBase::natural}, {"2", LogBase::two}}));
        return t;
    }();
    return table;
}

inline const Field& field(const std::string& key)
{
    for (auto& f : fields())
        if (f.key == key) return f;
    throw ConfigError(key, "unknown key");
}

} // namespace detail

inline std::vector<std::string> config_keys()
{
    std::vector<std::string> k;
    for (auto& f : detail::fields()) k.push_back(f.key);
    return k;
}

inline bool is_numeric_key(const std::string& key)
{
    return detail::field(key).numeric;
}

inline double get_value(const RunConfig& c, const std::string& key)
{
    auto& f = detail::field(key);
    if (!f.numeric) throw ConfigError(key, "not a numeric key");
    return f.get_num(c);
}

inline void set_value(RunConfig& c, const std::string& key, double x)
{
    auto& f = detail::field(key);
    if (!f.numeric) throw ConfigError(key, "not a numeric key");
    f.set_num(c, x);
}

inline void set_value(RunConfig& c, const std::string& key, const std::string& text)
{
    detail::field(key).set(c, detail::trim(text));
}

// "key=value" as given on the command line
inline void apply_override(RunConfig& c, const std::string& kv)
{
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError(kv, "expected key=value");
    set_value(c, detail::trim(kv.substr(0, eq)), kv.substr(eq + 1));
}

inline void validate(const RunConfig& c)
{
    auto need = [](bool ok, const char* key, const char* msg) {
        if (!ok) throw ConfigError(key, msg);
    };
    auto finite = [](double x) { return std::isfinite(x); };
    for (int i = 0; i < 2; ++i) {
        const LayerParams& l = i == 0 ? c.layer1 : c.layer2;
        const char* lk = i == 0 ? "lambda_so_eV" : "lambda_so2_eV";
        const char* vk = i == 0 ? "v_fermi_m_per_s" : "v_fermi2_m_per_s";
        const char* dk = i == 0 ? "d1_inv_eV" : "d2_inv_eV";
        const char* gk = i == 0 ? "sigma1_im_eV" : "sigma2_im_eV";
        const char* rk = i == 0 ? "sigma1_re_eV" : "sigma2_re_eV";
        need(finite(l.lambda_so) && l.lambda_so > 0, lk, "must be > 0");
        need(finite(l.v_fermi) && l.v_fermi > 0 && l.v_fermi < constants.c_si, vk, "must lie in (0, c)");
        need(finite(l.d) && l.d >= 0 && l.d <= c.cavity.length_L, dk, "must lie in [0, L_inv_eV]");
        need(finite(l.sigma.real()), rk, "must be finite");
        need(finite(l.sigma.imag()) && l.sigma.imag() >= 0, gk, "must be >= 0");
    }
    need(finite(c.cavity.length_L) && c.cavity.length_L > 0, "L_inv_eV", "must be > 0");
    need(c.cavity.n_max >= 1, "n_max", "must be >= 1");
    need(finite(c.cavity.coupling) && c.cavity.coupling >= 0, "coupling", "must be >= 0");
    need(finite(c.cavity.epsilon_reg) && c.cavity.epsilon_reg > 0, "epsilon_reg", "must be > 0");
    need(finite(c.kin.p1) && c.kin.p1 >= 0, "p1_eV", "must be >= 0");
    need(finite(c.kin.p2) && c.kin.p2 >= 0, "p2_eV", "must be >= 0");
    need(finite(c.kin.phi1), "phi1_rad", "must be finite");
    need(finite(c.kin.phi2), "phi2_rad", "must be finite");
    need(c.quad.n_phi >= 2, "n_phi", "must be >= 2");
    need(finite(c.quad.degeneracy_tol) && c.quad.degeneracy_tol > 0, "degeneracy_tol", "must be > 0");
}

// wraps angles and validates
inline RunConfig finalize(RunConfig c)
{
    c.kin.phi1 = wrap_angle(c.kin.phi1);
    c.kin.phi2 = wrap_angle(c.kin.phi2);
    validate(c);
    return c;
}

// Flat "key = value" text; '#' starts a comment. Layer-2 material constants
// default to the layer-1 values when not given.
inline RunConfig parse_config(const std::string& text)
{
    RunConfig c;
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        detail::field(key);   // unknown keys rejected here
        if (kv.count(key)) throw ConfigError(key, "given twice");
        kv[key] = detail::trim(line.substr(eq + 1));
    }
    for (auto& f : detail::fields()) {
        auto it = kv.find(f.key);
        if (it != kv.end()) f.set(c, it->second);
    }
    if (!kv.count("lambda_so2_eV")) c.layer2.lambda_so = c.layer1.lambda_so;
    if (!kv.count("v_fermi2_m_per_s")) c.layer2.v_fermi = c.layer1.v_fermi;
    return finalize(c);
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("config", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

inline std::string serialize_config(const RunConfig& c, const std::string& prefix = "")
{
    std::string out;
    for (auto& f : detail::fields())
        out += prefix + f.key + "=" + f.get(c) + "\n";
    return out;
}

} // namespace cavent
