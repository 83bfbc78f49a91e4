#pragma once

#include <cstdint>
#include <random>

#include "advdiff/mesh.hpp"

namespace advdiff {

/// Deterministic uniform draws on top of mt19937_64. The mapping to doubles
/// is spelled out here instead of using std::uniform_real_distribution, whose
/// output is implementation-defined; identical seeds must give identical
/// experiment rows on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1, 1).
    double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

private:
    std::mt19937_64 eng_;
};

/// Componentwise uniform [-1,1] field, normalized to unit X-norm.
inline StateField random_unit_state(Rng& rng, const XProduct& xp) {
    StateField u(xp.weights.size());
    for (double& ui : u) ui = rng.uniform_pm1();
    const double n = x_norm(u, xp);
    if (n > 0.0)
        for (double& ui : u) ui /= n;
    return u;
}

} // namespace advdiff
