#ifndef KATZUP_KATZ_HPP
#define KATZUP_KATZ_HPP

#include <cstddef>
#include <span>

#include "katzup/graph.hpp"
#include "katzup/linalg.hpp"

namespace katzup {

enum class Solver { CG, Neumann };

struct Provenance {
    enum class Kind { Exact, Approximate };
    Kind kind = Kind::Exact;
    /// Number of truncated updates applied since the last exact solve.
    std::size_t approximate_updates = 0;

    bool exact() const noexcept { return kind == Kind::Exact; }
};

/// Katz vector x solving (I - alpha A) x = seed, plus how it was obtained.
struct KatzState {
    double alpha = 0.0;
    Vector seed;
    Vector x;
    Provenance provenance;

    std::size_t size() const noexcept { return x.size(); }
};

struct KatzOptions {
    Solver solver = Solver::CG;
    /// Relative residual (CG) or relative term size (Neumann).
    double tol = 1e-10;
    std::size_t max_iter = 10000;
    /// CG initial guess; empty means zero.
    std::span<const double> initial_guess = {};
};

/// factor / rho(A). Throws as spectral_radius does.
double choose_alpha(const Graph &g, double factor = 0.85);

/**
 * Solves for the Katz vector with the given seed (all ones for standard Katz,
 * an indicator for the personalized variant). Isolated nodes get x_i = seed_i
 * exactly. `report`, when non-null, receives the solver report.
 */
KatzState katz(const Graph &g, double alpha, std::span<const double> seed,
               const KatzOptions &options = {}, SolveReport *report = nullptr);

/// Standard Katz (seed = all ones).
KatzState katz(const Graph &g, double alpha, const KatzOptions &options = {},
               SolveReport *report = nullptr);

double total_communicability(const KatzState &state);

} // namespace katzup

#endif // KATZUP_KATZ_HPP
