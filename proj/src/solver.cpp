#include "windice/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "windice/reduce.hpp"

namespace windice {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double frac(double v) { return v - std::floor(v); }

double band_value(int level, double raw) { return level + 1.0 - 1.0 / (1.0 + raw); }

}  // namespace

GEvaluator::GEvaluator(const Environment<double>& env, int samples, std::uint64_t seed)
    : env_(env), samples_(samples) {
    const int dims = env.num_candidates() + env.num_types();
    // additive-recurrence sequence: increments from the generalized
    // golden-ratio root of x^(d+1) = x + 1, one coordinate per dimension
    double gamma = 1.5;
    for (int it = 0; it < 64; ++it)
        gamma = std::pow(1.0 + gamma, 1.0 / (dims + 1));
    alpha_.resize(dims);
    shift_.resize(dims);
    double a = 1.0;
    for (int d = 0; d < dims; ++d) {
        a /= gamma;
        alpha_[d] = frac(a);
        shift_[d] = (mix64(seed ^ mix64(0xd1ce + d)) >> 11) * 0x1.0p-53;
    }
}

double GEvaluator::uniform(long sample, int dim) const {
    return frac(shift_[dim] + (sample + 1) * alpha_[dim]);
}

double GEvaluator::win_probability(const std::vector<ScoreModel>& models, int forced) const {
    const int n = env_.num_candidates();
    const int fc = env_.candidate_of(forced);
    long wins = 0;
    std::vector<double> scores(n);
    std::vector<int> order(n);

    for (long j = 0; j < samples_; ++j) {
        for (int c = 0; c < n; ++c) {
            int type;
            if (c == fc) {
                type = forced;
            } else {
                double u = uniform(j, c);
                double cum = 0;
                int l = 0;
                for (; l < env_.types_of(c) - 1; ++l) {
                    cum += env_.prior_of(c)[l];
                    if (u < cum) break;
                }
                type = env_.offset(c) + l;
            }
            const ScoreModel& sm = models[type];
            switch (sm.kind) {
                case ScoreModel::Kind::Never:
                    scores[c] = kLosingFace;
                    break;
                case ScoreModel::Kind::Fixed:
                    scores[c] = sm.value;
                    break;
                case ScoreModel::Kind::Scaled: {
                    double u = uniform(j, n + type);
                    double roll = -std::log1p(-std::min(u, 1.0 - 1e-16));
                    double raw = sm.theta * roll - sm.tau;
                    scores[c] = raw > 0 ? band_value(sm.level, raw) : kLosingFace;
                    break;
                }
            }
        }
        for (int c = 0; c < n; ++c) order[c] = c;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (scores[a] != scores[b]) return scores[a] > scores[b];
            return a < b;
        });
        CandidateSet winners = 0;
        for (int c : order) {
            if (!(scores[c] > 0)) break;
            CandidateSet next = winners | (CandidateSet(1) << c);
            if (env_.matroid().independent(next)) winners = next;
        }
        wins += (winners >> fc) & 1;
    }
    return static_cast<double>(wins) / static_cast<double>(samples_);
}

std::vector<double> g_eval(const Environment<double>& env, TypeSet s,
                           const std::vector<double>& theta, double tau, int samples,
                           std::uint64_t seed) {
    if (popcount_types(s) > 8) throw std::domain_error("g_eval: at most 8 scaled types");
    GEvaluator ev(env, samples, seed);
    std::vector<ScoreModel> models(env.num_types());
    for (int g = 0; g < env.num_types(); ++g) {
        if (!((s >> g) & 1)) continue;
        if (!(theta[g] > 0)) throw std::domain_error("g_eval: scale parameters must be positive");
        models[g] = ScoreModel{ScoreModel::Kind::Scaled, kLosingFace, 1, theta[g], tau};
    }
    std::vector<double> out(env.num_types(), 0.0);
    for (int g = 0; g < env.num_types(); ++g)
        if ((s >> g) & 1) out[g] = ev.win_probability(models, g);
    return out;
}

namespace {

constexpr double kThetaMin = 0x1.0p-30;
constexpr double kThetaMax = 0x1.0p30;
constexpr double kTauMax = 0x1.0p30;

struct LayerSolver {
    const GEvaluator& ev;
    std::vector<ScoreModel>& models;
    const std::vector<int>& layer;
    const Environment<double>& env;
    const InterimRule<double>& x;
    const SolverOptions& opts;
    long evals = 0;
    bool budget_hit = false;

    bool spend(long n = 1) {
        evals += n;
        if (evals > opts.eval_budget) budget_hit = true;
        return !budget_hit;
    }

    double g_of(int t) {
        spend();
        return ev.win_probability(models, t);
    }

    void set_tau(double tau) {
        for (int t : layer) models[t].tau = tau;
    }

    double sum_residual() {
        double r = 0;
        for (int t : layer) r += env.f(t) * (g_of(t) - x(t));
        return r;
    }

    // The expected winner mass is strictly decreasing in tau.
    void solve_tau(double g_tol) {
        set_tau(0);
        if (sum_residual() <= g_tol || budget_hit) return;
        double lo = 0, hi = 1;
        while (hi < kTauMax && !budget_hit) {
            set_tau(hi);
            if (sum_residual() <= 0) break;
            lo = hi;
            hi *= 2;
        }
        for (int it = 0; it < 60 && !budget_hit; ++it) {
            double mid = 0.5 * (lo + hi);
            set_tau(mid);
            double r = sum_residual();
            if (std::abs(r) <= g_tol) return;
            (r > 0 ? lo : hi) = mid;
            if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
        }
        set_tau(0.5 * (lo + hi));
    }

    // g_t is strictly increasing in its own theta.
    void solve_theta(int t, double g_tol) {
        double lo = models[t].theta, hi = models[t].theta;
        double g = g_of(t);
        if (std::abs(g - x(t)) <= g_tol || budget_hit) return;
        if (g < x(t)) {
            while (hi < kThetaMax && !budget_hit) {
                hi *= 2;
                models[t].theta = hi;
                if (g_of(t) >= x(t)) break;
            }
        } else {
            while (lo > kThetaMin && !budget_hit) {
                lo /= 2;
                models[t].theta = lo;
                if (g_of(t) <= x(t)) break;
            }
        }
        for (int it = 0; it < 60 && !budget_hit; ++it) {
            double mid = std::sqrt(lo * hi);  // geometric midpoint for scale parameters
            models[t].theta = mid;
            double gm = g_of(t);
            if (std::abs(gm - x(t)) <= g_tol) return;
            (gm < x(t) ? lo : hi) = mid;
            if (hi / lo <= 1.0 + 1e-12) break;
        }
        models[t].theta = std::sqrt(lo * hi);
    }

    SolverReport run(bool tight, double tol) {
        const double g_tol = tol / 4;
        SolverReport report;
        for (int sweep = 0; sweep < opts.max_sweeps && !budget_hit; ++sweep) {
            if (!tight)
                solve_tau(g_tol);
            else
                set_tau(0);
            for (size_t i = 0; i + 1 < layer.size(); ++i) solve_theta(layer[i], g_tol);
            report.residuals.clear();
            double worst = 0;
            for (int t : layer) {
                double r = std::abs(g_of(t) - x(t));
                report.residuals.push_back(r);
                worst = std::max(worst, r);
            }
            if (worst <= tol) {
                report.converged = true;
                break;
            }
        }
        report.evaluations = evals;
        return report;
    }
};

}  // namespace

BarrierSolution solve_barrier_dice(const Environment<double>& env, TypeSet s,
                                   const InterimRule<double>& x, double tol,
                                   const SolverOptions& opts) {
    if (s == 0) throw std::domain_error("solve_barrier_dice: empty set");
    if (popcount_types(s) > 6)
        throw std::domain_error("solve_barrier_dice: at most 6 types per barrier set");
    GEvaluator ev(env, opts.qmc_samples, opts.seed);
    std::vector<ScoreModel> models(env.num_types());
    std::vector<int> layer;
    for (int g = 0; g < env.num_types(); ++g)
        if ((s >> g) & 1) {
            models[g] = ScoreModel{ScoreModel::Kind::Scaled, kLosingFace, 1, 1.0, 0.0};
            layer.push_back(g);
        }

    auto rank_table = build_rank_table(env.matroid());
    bool tight = as_double(slack_matroid(env, x, s, rank_table)) <= 1e-9;

    LayerSolver solver{ev, models, layer, env, x, opts};
    BarrierSolution sol;
    sol.report = solver.run(tight, tol);
    sol.theta.assign(env.num_types(), 0.0);
    for (int t : layer) sol.theta[t] = models[t].theta;
    sol.tau = models[layer.front()].tau;
    return sol;
}

namespace {

// Finite die from a solved continuous score model: the losing mass plus
// equal-probability quantile faces of the positive part, mapped into the
// model's level band.
Die<double> discretize_model(const ScoreModel& sm, int quantiles) {
    if (sm.kind == ScoreModel::Kind::Never) return Die<double>::single(kLosingFace);
    if (sm.kind == ScoreModel::Kind::Fixed) return Die<double>::single(sm.value);
    double p_neg = sm.tau > 0 ? 1.0 - std::exp(-sm.tau / sm.theta) : 0.0;
    if (p_neg >= 1.0 - 1e-13) return Die<double>::single(kLosingFace);
    std::vector<Face<double>> faces;
    if (p_neg > 0) faces.push_back({kLosingFace, p_neg});
    const double share = (1.0 - p_neg) / quantiles;
    for (int q = 0; q < quantiles; ++q) {
        double u = (q + 0.5) / quantiles;
        double raw = sm.theta * -std::log1p(-u);  // memoryless: raw = theta * Exp quantile
        faces.push_back({band_value(sm.level, raw), share});
    }
    return Die<double>(std::move(faces));
}

Environment<double> component_environment(const Environment<double>& env,
                                          const std::vector<int>& candidates) {
    std::vector<std::vector<double>> prior;
    std::vector<std::vector<std::string>> names;
    for (int c : candidates) {
        prior.push_back(env.prior_of(c));
        std::vector<std::string> nm;
        for (int l = 0; l < env.types_of(c); ++l) nm.push_back(env.type_name(env.offset(c) + l));
        names.push_back(std::move(nm));
    }
    const int nc = static_cast<int>(candidates.size());
    std::vector<std::vector<int>> indep;
    for (CandidateSet s = 0; s < (CandidateSet(1) << nc); ++s) {
        CandidateSet embedded = 0;
        for (int i = 0; i < nc; ++i)
            if ((s >> i) & 1) embedded |= CandidateSet(1) << candidates[i];
        if (env.matroid().independent(embedded)) {
            std::vector<int> members;
            for (int i = 0; i < nc; ++i)
                if ((s >> i) & 1) members.push_back(i);
            indep.push_back(std::move(members));
        }
    }
    return Environment<double>(std::move(prior),
                               Matroid::explicit_family(nc, indep, /*require_matroid=*/false),
                               std::move(names));
}

}  // namespace

AssemblyResult assemble_matroid_dice(const Environment<double>& env, const InterimRule<double>& x,
                                     double tol, const SolverOptions& opts) {
    if (env.num_types() > 8)
        throw std::domain_error("assemble_matroid_dice: at most 8 types supported");
    auto verdict = check_feasibility_matroid(env, x);
    if (!verdict.feasible) {
        std::ostringstream msg;
        msg << "interim rule is infeasible; violating set mask=" << verdict.witness->set
            << " slack=" << verdict.witness->slack;
        throw std::domain_error(msg.str());
    }

    const int m = env.num_types();
    auto rank_table = build_rank_table(env.matroid());
    GEvaluator ev(env, opts.qmc_samples, opts.seed);
    std::vector<ScoreModel> models(m);
    std::vector<int> levels(m, -1);
    AssemblyResult result;
    result.report.converged = true;

    for (const auto& comp : env.matroid().components()) {
        TypeSet comp_types = 0;
        for (int c : comp) comp_types |= env.candidate_mask(c);
        TypeSet actives = 0, ones = 0;
        for (int g = 0; g < m; ++g) {
            if (!((comp_types >> g) & 1)) continue;
            if (env.f(g) * x(g) > 0) {
                actives |= TypeSet(1) << g;
                if (x(g) >= 1.0 - 1e-9) ones |= TypeSet(1) << g;
            }
        }
        for (int g = 0; g < m; ++g) {
            if (!((ones >> g) & 1)) continue;
            // distinct top-band values; these types always win when present
            models[g] = ScoreModel{ScoreModel::Kind::Fixed, m + 3.0 + (g + 1.0) / (m + 2.0), 0, 1, 0};
            levels[g] = m + 3;
        }

        TypeSet assigned = ones;
        int level = m + 2;
        while (assigned != actives) {
            // smallest minimal tight superset of the assigned set; whole
            // active set (possibly non-tight) when nothing is tight
            TypeSet next = 0;
            bool tight = false;
            for (int size = popcount_types(assigned) + 1; size <= popcount_types(actives) && !next;
                 ++size) {
                for (TypeSet s = assigned + 1; s <= actives && !next; ++s) {
                    if ((s & assigned) != assigned || (s & ~actives) || popcount_types(s) != size)
                        continue;
                    if (as_double(slack_matroid(env, x, s, rank_table)) <= 1e-9) {
                        next = s;
                        tight = true;
                    }
                }
            }
            if (!next) next = actives;

            std::vector<int> layer;
            for (int g = 0; g < m; ++g)
                if ((next >> g) & 1 && !((assigned >> g) & 1)) {
                    models[g] = ScoreModel{ScoreModel::Kind::Scaled, kLosingFace, level, 1.0, 0.0};
                    levels[g] = level;
                    layer.push_back(g);
                }

            LayerSolver solver{ev, models, layer, env, x, opts};
            SolverReport layer_report = solver.run(tight, tol);
            result.report.evaluations += layer_report.evaluations;
            result.report.converged = result.report.converged && layer_report.converged;
            for (double r : layer_report.residuals) result.report.residuals.push_back(r);

            assigned = next;
            --level;
        }
    }

    // discretize, then reduce each component in isolation (winners in one
    // component never affect another); the reduction enumerates the other
    // dice's faces, so the quantile resolution shrinks with component size
    // to keep that enumeration at desk scale
    DiceSystem<double> dice;
    dice.die.assign(m, Die<double>::single(kLosingFace));
    for (const auto& comp : env.matroid().components()) {
        int comp_types = 0;
        for (int c : comp) comp_types += env.types_of(c);
        int quant = opts.quantile_faces;
        auto reduce_cost = [&](int q) {
            // dominant term: the first die's symbol row enumerates every
            // other die's faces once per target face
            double product = static_cast<double>(env.types_of(comp[0])) * q;
            for (size_t i = 1; i < comp.size(); ++i)
                product *= static_cast<double>(env.types_of(comp[i])) * q + 1;
            return product;
        };
        while (quant > 25 && reduce_cost(quant) > 5e7) quant = quant * 3 / 4;

        DiceSystem<double> cdice;
        for (int c : comp)
            for (int l = 0; l < env.types_of(c); ++l)
                cdice.die.push_back(discretize_model(models[env.offset(c) + l], quant));
        Environment<double> cenv = component_environment(env, comp);
        try {
            cdice = reduce_all_faces(cenv, cdice, 1e-8);
        } catch (const std::runtime_error&) {
            // keep the unreduced quantile dice; the final validation decides
        }
        int idx = 0;
        for (int c : comp)
            for (int l = 0; l < env.types_of(c); ++l) dice.die[env.offset(c) + l] = cdice.die[idx++];
    }

    auto mc = interim_monte_carlo(env, dice, opts.validation_samples, opts.seed);
    result.estimate = mc.x;
    result.stderr_ = mc.stderr_;
    double max_err = 0, max_se = 0;
    for (int g = 0; g < m; ++g) {
        max_err = std::max(max_err, std::abs(mc.x(g) - x(g)));
        max_se = std::max(max_se, mc.stderr_[g]);
    }
    result.report.converged =
        result.report.converged && max_err <= std::max(tol, 5 * max_se);
    result.dice = std::move(dice);
    result.levels = std::move(levels);
    return result;
}

}  // namespace windice
