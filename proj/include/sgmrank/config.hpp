#pragma once

#include <optional>
#include <string>

#include "sgmrank/cost.hpp"
#include "sgmrank/sgm.hpp"

namespace sgmrank {

/// Pipeline configuration. Penalties left unset resolve to per-cost-kind
/// defaults scaled to the kind's cost range; border_margin < 0 resolves to
/// dmax.
struct SgmConfig {
    KernelSpec kernel;
    int dmax = 64;
    std::optional<int> p1;
    std::optional<int> p2;
    CostKind cost;
    double delta = 1.0;
    int border_margin = -1;
    bool subpixel = true;
    bool median = true;
    bool fill_holes = true;
    bool lr_check = true;
    long long lmax = 65535; // streaming model entry ceiling

    Penalties resolved_penalties() const;
    int resolved_border_margin() const {
        return border_margin < 0 ? dmax : border_margin;
    }
    void validate() const;
};

/// Tuned default penalties, proportional to the kind's maximum cost.
Penalties default_penalties(const CostKind& kind, const KernelSpec& kernel);

/// Flat key=value file, one key per line, '#' comments. Unknown keys fail.
SgmConfig load_config_file(const std::string& path);

/// Applies one key=value pair; shared by the file loader and flag overrides.
void apply_config_entry(SgmConfig& cfg, const std::string& key,
                        const std::string& value);

/// Effective configuration as key=value lines (one per line).
std::string echo_config(const SgmConfig& cfg);

KernelSpec parse_kernel(const std::string& text); // "MxN"

} // namespace sgmrank
