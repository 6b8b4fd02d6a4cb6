#include "sgmrank/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sgmrank {

namespace {

// Penalty ratios relative to the cost kind's maximum, fixed by grid search
// on the bundled real dataset (see README).
constexpr double kP1Ratio = 0.03;
constexpr double kP2Ratio = 2.0;

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw std::runtime_error("expected boolean, got '" + v + "'");
}

int parse_int(const std::string& v) {
    size_t pos = 0;
    const int r = std::stoi(v, &pos);
    if (pos != v.size())
        throw std::runtime_error("expected integer, got '" + v + "'");
    return r;
}

double parse_double(const std::string& v) {
    size_t pos = 0;
    const double r = std::stod(v, &pos);
    if (pos != v.size())
        throw std::runtime_error("expected number, got '" + v + "'");
    return r;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Penalties default_penalties(const CostKind& kind, const KernelSpec& kernel) {
    const int c_max = max_cost_bound(kind, kernel);
    Penalties pen;
    pen.p1 = std::max(1, static_cast<int>(std::lround(kP1Ratio * c_max)));
    pen.p2_base = std::max(pen.p1, static_cast<int>(std::lround(kP2Ratio * c_max)));
    return pen;
}

Penalties SgmConfig::resolved_penalties() const {
    Penalties pen = default_penalties(cost, kernel);
    if (p1) pen.p1 = *p1;
    if (p2) pen.p2_base = *p2;
    pen.validate();
    return pen;
}

void SgmConfig::validate() const {
    kernel.validate();
    cost.validate();
    if (dmax < 1)
        throw std::runtime_error("dmax must be >= 1");
    if (delta < 0)
        throw std::runtime_error("delta must be non-negative");
    if (lmax < 0)
        throw std::runtime_error("lmax must be non-negative");
    resolved_penalties();
}

KernelSpec parse_kernel(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos)
        throw std::runtime_error("kernel must look like MxN, got '" + text + "'");
    KernelSpec k;
    k.rows = parse_int(text.substr(0, x));
    k.cols = parse_int(text.substr(x + 1));
    k.validate();
    return k;
}

void apply_config_entry(SgmConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "kernel") cfg.kernel = parse_kernel(value);
    else if (key == "dmax") cfg.dmax = parse_int(value);
    else if (key == "p1") cfg.p1 = parse_int(value);
    else if (key == "p2") cfg.p2 = parse_int(value);
    else if (key == "cost") cfg.cost.variant = cost_function_from_name(value);
    else if (key == "alpha") cfg.cost.alpha = parse_double(value);
    else if (key == "delta") cfg.delta = parse_double(value);
    else if (key == "border_margin") cfg.border_margin = parse_int(value);
    else if (key == "subpixel") cfg.subpixel = parse_bool(value);
    else if (key == "median") cfg.median = parse_bool(value);
    else if (key == "fill_holes") cfg.fill_holes = parse_bool(value);
    else if (key == "lr_check") cfg.lr_check = parse_bool(value);
    else if (key == "lmax") cfg.lmax = parse_int(value);
    else throw std::runtime_error("unknown config key: " + key);
}

SgmConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error(path + ": unreadable config file");
    SgmConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        try {
            apply_config_entry(cfg, trim(line.substr(0, eq)),
                               trim(line.substr(eq + 1)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return cfg;
}

std::string echo_config(const SgmConfig& cfg) {
    const Penalties pen = cfg.resolved_penalties();
    std::ostringstream os;
    os << "kernel=" << cfg.kernel.rows << "x" << cfg.kernel.cols << "\n"
       << "dmax=" << cfg.dmax << "\n"
       << "cost=" << cost_function_name(cfg.cost.variant) << "\n"
       << "alpha=" << cfg.cost.alpha << "\n"
       << "p1=" << pen.p1 << "\n"
       << "p2=" << pen.p2_base << "\n"
       << "delta=" << cfg.delta << "\n"
       << "border_margin=" << cfg.resolved_border_margin() << "\n"
       << "subpixel=" << (cfg.subpixel ? "true" : "false") << "\n"
       << "median=" << (cfg.median ? "true" : "false") << "\n"
       << "fill_holes=" << (cfg.fill_holes ? "true" : "false") << "\n"
       << "lr_check=" << (cfg.lr_check ? "true" : "false") << "\n"
       << "lmax=" << cfg.lmax << "\n";
    return os.str();
}

} // namespace sgmrank
