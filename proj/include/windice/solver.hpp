#pragma once

#include <cstdint>
#include <vector>

#include "windice/evaluate.hpp"
#include "windice/feasibility.hpp"
#include "windice/types.hpp"

namespace windice {

struct SolverReport {
    std::vector<double> residuals;  // |g_t - x_t| per solved type, global index order
    long evaluations = 0;
    bool converged = false;
};

struct SolverOptions {
    int qmc_samples = 16384;
    long eval_budget = 100000;  // win-probability evaluations per layer
    int max_sweeps = 50;
    std::uint64_t seed = 0;
    int quantile_faces = 200;
    long validation_samples = 200000;
};

// Continuous score model of one type during assembly. Scaled dice draw a
// primitive roll v ~ Exp(1) and score theta*v - tau, mapped order-preserving
// into the band (level, level+1); nonpositive raws lose.
struct ScoreModel {
    enum class Kind { Never, Fixed, Scaled } kind = Kind::Never;
    double value = kLosingFace;  // Fixed
    int level = 0;               // Scaled
    double theta = 1.0;
    double tau = 0.0;
};

// Deterministic quasi-Monte-Carlo estimator of interim win probabilities
// with common random numbers: for a fixed sample count the estimate is a
// deterministic function of the score models, which the bisection layers
// rely on. One dimension per candidate (type draw) plus one per type
// (primitive roll).
class GEvaluator {
public:
    GEvaluator(const Environment<double>& env, int samples, std::uint64_t seed);

    // Pr[forced type wins | forced], under the given per-type score models.
    double win_probability(const std::vector<ScoreModel>& models, int forced) const;

    int samples() const { return samples_; }

private:
    double uniform(long sample, int dim) const;

    const Environment<double>& env_;
    int samples_;
    std::vector<double> alpha_;  // additive-recurrence increments
    std::vector<double> shift_;
};

// Interim win probabilities of the types in S under scaled dice with the
// given parameters, in the environment restricted to S (other types never
// win). Entries outside S are zero.
std::vector<double> g_eval(const Environment<double>& env, TypeSet s,
                           const std::vector<double>& theta, double tau, int samples,
                           std::uint64_t seed = 0);

struct BarrierSolution {
    std::vector<double> theta;  // global index order; zero outside S
    double tau = 0.0;
    SolverReport report;
};

// Solves the interim equation system g_t(tau, theta) = x(t) for a barrier
// set S by nested monotone bisection sweeps: the last type's theta is fixed
// at 1, tau is driven by the sum equation (tau = 0 when S is tight), and
// each remaining theta_t is driven by its own equation.
BarrierSolution solve_barrier_dice(const Environment<double>& env, TypeSet s,
                                   const InterimRule<double>& x, double tol,
                                   const SolverOptions& opts = {});

struct AssemblyResult {
    DiceSystem<double> dice;
    SolverReport report;
    InterimRule<double> estimate;     // Monte-Carlo interim of the final dice
    std::vector<double> stderr_;
    std::vector<int> levels;          // per-type level, -1 for single-sided dice
};

// Full pipeline of the existence construction at desk scale: split by
// matroid components, peel the tight-set lattice from barrier sets outward
// with one level per layer, solve each layer, then discretize to quantile
// faces and run Caratheodory reduction per component.
AssemblyResult assemble_matroid_dice(const Environment<double>& env, const InterimRule<double>& x,
                                     double tol, const SolverOptions& opts = {});

}  // namespace windice
