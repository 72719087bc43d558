#include <CLI11.hpp>
#include <array>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "windice/nonmatroid.hpp"
#include "windice/construct_single.hpp"
#include "windice/construct_symmetric.hpp"
#include "windice/evaluate.hpp"
#include "windice/io.hpp"
#include "windice/reduce.hpp"
#include "windice/solver.hpp"

namespace {

using namespace windice;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

std::string fmt(double v, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

template <class S>
std::string scalar_str(const S& v) {
    if constexpr (scalar_traits<S>::exact)
        return v.str();
    else
        return fmt(v);
}

template <class S>
std::string set_str(const Environment<S>& env, TypeSet s) {
    std::string out = "{";
    bool first = true;
    for (int g = 0; g < env.num_types(); ++g)
        if ((s >> g) & 1) {
            if (!first) out += ", ";
            out += env.type_key(g);
            first = false;
        }
    return out + "}";
}

template <class S>
int report_verdict(const Environment<S>& env, const FeasibilityVerdict<S>& verdict) {
    if (verdict.feasible) {
        std::cout << "feasible\n";
        return kExitOk;
    }
    std::cout << "infeasible\n";
    std::cout << "violating set: " << set_str(env, verdict.witness->set) << "\n";
    if constexpr (scalar_traits<S>::exact)
        std::cout << "slack: " << verdict.witness->slack.str() << "\n";
    else
        std::cout << "slack: " << fmt(as_double(verdict.witness->slack), 12) << "\n";
    return kExitInfeasible;
}

template <class S>
int run_check(const std::string& env_path, const std::string& interim_path, bool matroid_mode) {
    Environment<S> env = environment_from_json<S>(load_json_file(env_path));
    InterimRule<S> x = interim_from_json<S>(load_json_file(interim_path), env);
    FeasibilityVerdict<S> verdict = matroid_mode ? check_feasibility_matroid(env, x)
                                                 : check_feasibility_single_winner(env, x);
    return report_verdict(env, verdict);
}

template <class S>
int run_construct(const std::string& env_path, const std::string& interim_path,
                  const std::string& out_path) {
    Environment<S> env = environment_from_json<S>(load_json_file(env_path));
    InterimRule<S> x = interim_from_json<S>(load_json_file(interim_path), env);
    auto verdict = check_feasibility_single_winner(env, x);
    if (!verdict.feasible) return report_verdict(env, verdict);
    DiceSystem<S> dice = construct_dice(env, x);
    save_json_file(out_path, dice_to_json(dice, env));
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

template <class S>
void print_interim(const Environment<S>& env, const InterimRule<S>& x) {
    for (int g = 0; g < env.num_types(); ++g)
        std::cout << env.type_key(g) << "  " << scalar_str(x(g)) << "\n";
}

template <class S>
int run_eval(const std::string& env_path, const std::string& dice_path,
             const std::string& out_path) {
    Environment<S> env = environment_from_json<S>(load_json_file(env_path));
    DiceSystem<S> dice = dice_from_json<S>(load_json_file(dice_path), env);
    InterimRule<S> x =
        env.single_winner() ? interim_single_winner(env, dice) : interim_exact_enumeration(env, dice);
    print_interim(env, x);
    if (!out_path.empty()) save_json_file(out_path, interim_to_json(x, env));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"winner-selecting dice: Border feasibility, construction, and evaluation"};
    app.require_subcommand(1);

    std::string env_path, interim_path, dice_path, out_path, report_path, prior_path;
    std::string type_key, x_csv, instance_path, scheme_path;
    bool exact = false;
    double tol = 0.02;
    long samples = 100000;
    std::uint64_t seed = 0;
    int n_candidates = 2;

    auto* check = app.add_subcommand("check", "check single-winner Border feasibility");
    check->add_option("--env", env_path)->required();
    check->add_option("--interim", interim_path)->required();
    check->add_flag("--exact", exact, "exact rational arithmetic");

    auto* check_m = app.add_subcommand("check-matroid", "check generalized Border feasibility");
    check_m->add_option("--env", env_path)->required();
    check_m->add_option("--interim", interim_path)->required();
    check_m->add_flag("--exact", exact);

    auto* construct = app.add_subcommand("construct", "construct single-winner dice");
    construct->add_option("--env", env_path)->required();
    construct->add_option("--interim", interim_path)->required();
    construct->add_option("--out", out_path)->required();
    construct->add_flag("--exact", exact);

    auto* construct_sym = app.add_subcommand("construct-sym", "construct symmetric i.i.d. dice");
    construct_sym->add_option("--n", n_candidates)->required();
    construct_sym->add_option("--prior", prior_path)->required();
    construct_sym->add_option("--interim", interim_path)->required();
    construct_sym->add_option("--out", out_path)->required();

    auto* eval = app.add_subcommand("eval", "compute the interim rule of a dice system");
    eval->add_option("--env", env_path)->required();
    eval->add_option("--dice", dice_path)->required();
    eval->add_option("--out", out_path);
    eval->add_flag("--exact", exact);

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo interim estimate");
    simulate->add_option("--env", env_path)->required();
    simulate->add_option("--dice", dice_path)->required();
    simulate->add_option("--samples", samples);
    simulate->add_option("--seed", seed);
    simulate->add_option("--out", out_path);

    auto* reduce = app.add_subcommand("reduce", "reduce die support to at most m+1 faces");
    reduce->add_option("--env", env_path)->required();
    reduce->add_option("--dice", dice_path)->required();
    reduce->add_option("--type", type_key, "reduce only this type (candidate:name)");
    reduce->add_option("--out", out_path)->required();

    auto* solve = app.add_subcommand("solve-matroid", "numerically assemble matroid dice");
    solve->add_option("--env", env_path)->required();
    solve->add_option("--interim", interim_path)->required();
    solve->add_option("--tol", tol);
    solve->add_option("--seed", seed);
    solve->add_option("--out", out_path)->required();
    solve->add_option("--report", report_path);

    auto* persuasion = app.add_subcommand("persuasion", "persuasion checks");
    auto* verify = persuasion->add_subcommand("verify-table1", "mechanized no-dice argument");
    auto* pcheck = persuasion->add_subcommand("check", "check a scheme for persuasiveness");
    pcheck->add_option("--instance", instance_path)->required();
    pcheck->add_option("--scheme", scheme_path)->required();
    persuasion->require_subcommand(1);

    auto* demo = app.add_subcommand("demo-nonmatroid", "dice for the non-matroid environment");
    demo->add_option("--x", x_csv, "four interim probabilities, comma separated")->required();
    demo->add_option("--out-env", env_path);
    demo->add_option("--out-dice", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check || *check_m) {
            bool matroid_mode = static_cast<bool>(*check_m);
            return exact ? run_check<Rational>(env_path, interim_path, matroid_mode)
                         : run_check<double>(env_path, interim_path, matroid_mode);
        }
        if (*construct)
            return exact ? run_construct<Rational>(env_path, interim_path, out_path)
                         : run_construct<double>(env_path, interim_path, out_path);
        if (*construct_sym) {
            auto [f, names] = shared_prior_from_json<double>(load_json_file(prior_path));
            auto x = shared_interim_from_json<double>(load_json_file(interim_path), names);
            auto verdict = check_feasibility_symmetric(n_candidates, f, x);
            if (!verdict.feasible) {
                std::cout << "infeasible\n";
                std::cout << "violating shared set: {";
                bool first = true;
                for (size_t t = 0; t < f.size(); ++t)
                    if ((verdict.witness->set >> t) & 1) {
                        std::cout << (first ? "" : ", ") << names[t];
                        first = false;
                    }
                std::cout << "}\n";
                std::cout << "slack: " << fmt(verdict.witness->slack, 12) << "\n";
                return kExitInfeasible;
            }
            auto shared = construct_symmetric_dice(n_candidates, f, x);
            Environment<double> env = symmetric_environment(n_candidates, f, names);
            save_json_file(out_path,
                           dice_to_json(replicate_symmetric_dice(n_candidates, shared, env), env));
            std::cout << "wrote " << out_path << "\n";
            return kExitOk;
        }
        if (*eval)
            return exact ? run_eval<Rational>(env_path, dice_path, out_path)
                         : run_eval<double>(env_path, dice_path, out_path);
        if (*simulate) {
            Environment<double> env = environment_from_json<double>(load_json_file(env_path));
            DiceSystem<double> dice = dice_from_json<double>(load_json_file(dice_path), env);
            MonteCarloResult mc = interim_monte_carlo(env, dice, samples, seed);
            for (int g = 0; g < env.num_types(); ++g)
                std::cout << env.type_key(g) << "  " << fmt(mc.x(g)) << "  stderr "
                          << fmt(mc.stderr_[g], 6) << "\n";
            if (!out_path.empty()) {
                Json j = interim_to_json(mc.x, env);
                Json se = Json::object();
                for (int g = 0; g < env.num_types(); ++g) se[env.type_key(g)] = mc.stderr_[g];
                j["stderr"] = se;
                j["samples"] = samples;
                j["seed"] = seed;
                save_json_file(out_path, j);
            }
            return kExitOk;
        }
        if (*reduce) {
            Environment<double> env = environment_from_json<double>(load_json_file(env_path));
            DiceSystem<double> dice = dice_from_json<double>(load_json_file(dice_path), env);
            if (type_key.empty()) {
                dice = reduce_all_faces(env, dice);
            } else {
                int target = -1;
                for (int g = 0; g < env.num_types(); ++g)
                    if (env.type_key(g) == type_key) target = g;
                if (target < 0) throw std::runtime_error("unknown type key '" + type_key + "'");
                dice = reduce_faces(env, dice, target);
            }
            save_json_file(out_path, dice_to_json(dice, env));
            for (int g = 0; g < env.num_types(); ++g)
                std::cout << env.type_key(g) << "  " << dice.at(g).num_faces() << " faces\n";
            return kExitOk;
        }
        if (*solve) {
            Environment<double> env = environment_from_json<double>(load_json_file(env_path));
            InterimRule<double> x = interim_from_json<double>(load_json_file(interim_path), env);
            auto verdict = check_feasibility_matroid(env, x);
            if (!verdict.feasible) return report_verdict(env, verdict);
            SolverOptions opts;
            opts.seed = seed;
            AssemblyResult result = assemble_matroid_dice(env, x, tol, opts);
            save_json_file(out_path, dice_to_json(result.dice, env));
            if (!report_path.empty()) {
                Json rep;
                rep["converged"] = result.report.converged;
                rep["evaluations"] = result.report.evaluations;
                rep["residuals"] = result.report.residuals;
                Json est = Json::object(), se = Json::object();
                for (int g = 0; g < env.num_types(); ++g) {
                    est[env.type_key(g)] = result.estimate(g);
                    se[env.type_key(g)] = result.stderr_[g];
                }
                rep["estimate"] = est;
                rep["stderr"] = se;
                rep["levels"] = result.levels;
                save_json_file(report_path, rep);
            }
            std::cout << (result.report.converged ? "converged" : "NOT converged") << "; wrote "
                      << out_path << "\n";
            return result.report.converged ? kExitOk : kExitError;
        }
        if (*verify) {
            Table1Trace trace = verify_table1_no_dice();
            for (const auto& s : trace.steps) std::cout << s << "\n";
            std::cout << "Pr[recommend A] = " << trace.pr_a.str() << "\n";
            std::cout << "Pr[recommend B] = " << trace.pr_b.str() << "\n";
            std::cout << "Pr[recommend A | A has type 1] = " << trace.x_aa1.str() << "\n";
            std::cout << (trace.contradiction && trace.all_checks_passed
                              ? "status: CONTRADICTION (no dice-based implementation)"
                              : "status: verification incomplete")
                      << "\n";
            return trace.all_checks_passed ? kExitOk : kExitError;
        }
        if (*pcheck) {
            PersuasionInstance inst = persuasion_instance_from_json(load_json_file(instance_path));
            Scheme scheme = scheme_from_json(load_json_file(scheme_path), inst);
            PersuasiveVerdict v = check_persuasive(inst, scheme);
            if (v.persuasive) {
                std::cout << "persuasive\n";
                return kExitOk;
            }
            std::cout << "not persuasive\n";
            for (const auto& viol : v.violations)
                std::cout << "recommendation " << viol.recommended << " loses to alternative "
                          << viol.alternative << "\n";
            return kExitInfeasible;
        }
        if (*demo) {
            std::array<double, 4> x{};
            {
                std::stringstream ss(x_csv);
                std::string item;
                for (int i = 0; i < 4; ++i) {
                    if (!std::getline(ss, item, ','))
                        throw std::runtime_error("--x needs four comma-separated values");
                    x[i] = std::stod(item);
                }
            }
            Environment<double> env = nonmatroid_example_environment();
            DiceSystem<double> dice = nonmatroid_example_dice(x);
            InterimRule<double> check_x = interim_exact_enumeration(env, dice);
            for (int g = 0; g < 4; ++g)
                std::cout << "candidate " << g << ": die "
                          << dice_to_json(dice, env)["dice"][env.type_key(g)].dump()
                          << "  evaluates to " << fmt(check_x(g)) << "\n";
            if (!env_path.empty()) save_json_file(env_path, environment_to_json(env));
            if (!out_path.empty()) save_json_file(out_path, dice_to_json(dice, env));
            return kExitOk;
        }
    } catch (const std::domain_error& e) {
        std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        return what.find("infeasible") != std::string::npos ? kExitInfeasible : kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
