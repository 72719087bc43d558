#include <doctest.h>

#include <random>

#include "windice/persuasion.hpp"
#include "windice/simplex.hpp"

using namespace windice;

TEST_CASE("exact simplex on known programs") {
    // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6 -> (4, 0), value 12
    LinearProgram lp;
    lp.objective = {Rational(3), Rational(2)};
    lp.constraints.push_back({{Rational(1), Rational(1)}, LinearProgram::Rel::Le, Rational(4)});
    lp.constraints.push_back({{Rational(1), Rational(3)}, LinearProgram::Rel::Le, Rational(6)});
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    CHECK(sol.value == Rational(12));
    CHECK(sol.x[0] == Rational(4));

    // equality and >= constraints through the two-phase path:
    // max x + y s.t. x + y = 1, x >= 1/3 -> value 1
    LinearProgram lp2;
    lp2.objective = {Rational(1), Rational(1)};
    lp2.constraints.push_back({{Rational(1), Rational(1)}, LinearProgram::Rel::Eq, Rational(1)});
    lp2.constraints.push_back({{Rational(1), Rational(0)}, LinearProgram::Rel::Ge, Rational(1, 3)});
    auto sol2 = solve_lp(lp2);
    REQUIRE(sol2.status == LpSolution::Status::Optimal);
    CHECK(sol2.value == Rational(1));

    // infeasible system
    LinearProgram lp3;
    lp3.objective = {Rational(1)};
    lp3.constraints.push_back({{Rational(1)}, LinearProgram::Rel::Ge, Rational(2)});
    lp3.constraints.push_back({{Rational(1)}, LinearProgram::Rel::Le, Rational(1)});
    CHECK(solve_lp(lp3).status == LpSolution::Status::Infeasible);

    // unbounded objective
    LinearProgram lp4;
    lp4.objective = {Rational(1)};
    lp4.constraints.push_back({{Rational(-1)}, LinearProgram::Rel::Le, Rational(0)});
    CHECK(solve_lp(lp4).status == LpSolution::Status::Unbounded);

    // degenerate vertices do not cycle under Bland's rule
    LinearProgram lp5;
    lp5.objective = {Rational(3, 4), Rational(-150), Rational(1, 50), Rational(-6)};
    lp5.constraints.push_back({{Rational(1, 4), Rational(-60), Rational(-1, 25), Rational(9)},
                               LinearProgram::Rel::Le, Rational(0)});
    lp5.constraints.push_back({{Rational(1, 2), Rational(-90), Rational(-1, 50), Rational(3)},
                               LinearProgram::Rel::Le, Rational(0)});
    lp5.constraints.push_back({{Rational(0), Rational(0), Rational(1), Rational(0)},
                               LinearProgram::Rel::Le, Rational(1)});
    auto sol5 = solve_lp(lp5);
    REQUIRE(sol5.status == LpSolution::Status::Optimal);
    CHECK(sol5.value == Rational(1, 20));
}

TEST_CASE("second-order rules from schemes") {
    PersuasionInstance inst = table1_instance();

    // always recommend action 1: X[1][i'][t] = 1 for all conditioning
    Scheme always;
    always.rec.assign(inst.num_profiles(), {Rational(0), Rational(1), Rational(0), Rational(0)});
    auto rule = second_order_from_scheme(inst, always);
    for (int ip = 0; ip < 3; ++ip)
        for (size_t t = 0; t < inst.actions[ip].size(); ++t) {
            CHECK(rule.x[1][ip][t] == Rational(1));
            CHECK(rule.x[0][ip][t] == Rational(0));
        }

    // uniformly random recommendation: X = 1/3 everywhere
    Scheme uniform;
    uniform.rec.assign(inst.num_profiles(),
                       {Rational(1, 3), Rational(1, 3), Rational(1, 3), Rational(0)});
    auto r3 = second_order_from_scheme(inst, uniform);
    for (int i = 0; i < 3; ++i)
        for (int ip = 0; ip < 3; ++ip)
            for (size_t t = 0; t < inst.actions[ip].size(); ++t)
                CHECK(r3.x[i][ip][t] == Rational(1, 3));

    // the benchmark optimal scheme recommends A w.p. 3/4 given A's type 1
    auto opt = second_order_from_scheme(inst, table1_optimal_scheme());
    CHECK(opt.x[0][0][0] == Rational(3, 4));
}

TEST_CASE("first-order component matches an independent marginalization") {
    PersuasionInstance inst = table1_instance();
    Scheme scheme = table1_optimal_scheme();
    auto first = first_order_from_scheme(inst, scheme);
    // overall recommendation probabilities: (3/8, 99/200, 13/100), summing to 1
    Rational pr_a(0), pr_b(0), pr_c(0);
    for (long p = 0; p < inst.num_profiles(); ++p) {
        Rational w = inst.profile_weight(inst.profile_at(p));
        pr_a += w * scheme.rec[p][0];
        pr_b += w * scheme.rec[p][1];
        pr_c += w * scheme.rec[p][2];
    }
    CHECK(pr_a == Rational(3, 8));
    CHECK(pr_b == Rational(99, 200));
    CHECK(pr_c == Rational(13, 100));
    CHECK(pr_a + pr_b + pr_c == Rational(1));
    // and the first-order rule marginalizes back to those totals
    Rational back(0);
    for (size_t t = 0; t < inst.actions[0].size(); ++t)
        back += inst.actions[0][t].prob * first[0][t];
    CHECK(back == pr_a);
}

TEST_CASE("persuasiveness checks") {
    PersuasionInstance inst = table1_instance();
    CHECK(check_persuasive(inst, table1_optimal_scheme()).persuasive);

    // recommending A whenever A has type 2 exposes the -infinity payoff
    Scheme bad = table1_optimal_scheme();
    for (long p = 0; p < inst.num_profiles(); ++p)
        if (inst.profile_at(p)[0] == 1)
            bad.rec[p] = {Rational(1), Rational(0), Rational(0), Rational(0)};
    auto verdict = check_persuasive(inst, bad);
    CHECK_FALSE(verdict.persuasive);
    REQUIRE_FALSE(verdict.violations.empty());
    CHECK(verdict.violations.front().recommended == 0);

    // a single-action instance recommending itself is persuasive
    PersuasionInstance solo;
    solo.actions.push_back({{Rational(1), Rational(1), Rational(1), false}});
    Scheme s;
    s.rec.assign(1, {Rational(1), Rational(0)});
    CHECK(check_persuasive(solo, s).persuasive);
}

TEST_CASE("symmetric second-order identity") {
    auto [y1, z1] = symmetric_second_order(2, {Rational(1)});
    CHECK(z1[0] == Rational(0));
    auto [y2, z2] = symmetric_second_order(3, {Rational(2, 5)});
    CHECK(z2[0] == Rational(3, 10));
    auto [y3, z3] = symmetric_second_order(4, {Rational(1, 4)});
    CHECK(z3[0] == Rational(1, 4));  // uniform random pick over n = 4
}

namespace {

// symmetrizes a scheme over candidate permutations (i.i.d. instances only)
Scheme symmetrize(const PersuasionInstance& inst, const Scheme& raw) {
    const int n = inst.num_actions();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    Scheme out;
    out.rec.assign(inst.num_profiles(),
                   std::vector<Rational>(n + 1, Rational(0)));
    long count = 0;
    do {
        ++count;
        for (long p = 0; p < inst.num_profiles(); ++p) {
            std::vector<int> profile = inst.profile_at(p);
            std::vector<int> permuted(n);
            for (int i = 0; i < n; ++i) permuted[perm[i]] = profile[i];
            long pp = inst.profile_index(permuted);
            for (int i = 0; i < n; ++i) out.rec[p][i] += raw.rec[pp][perm[i]];
            out.rec[p][n] += raw.rec[pp][n];
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    Rational inv(1, count);
    for (auto& row : out.rec)
        for (auto& v : row) v *= inv;
    return out;
}

}  // namespace

TEST_CASE("symmetric schemes satisfy (n-1)z + y = 1 exactly") {
    std::mt19937_64 rng(107);
    std::uniform_int_distribution<int> nd(2, 3), td(1, 3), num(0, 4);
    for (int trial = 0; trial < 100; ++trial) {
        int n = nd(rng), types = td(rng);
        // identical rational priors
        std::vector<ActionType> shared;
        Rational total(0);
        std::vector<Rational> weights;
        for (int t = 0; t < types; ++t) {
            Rational w(num(rng) + 1, 1);
            weights.push_back(w);
            total += w;
        }
        for (int t = 0; t < types; ++t)
            shared.push_back({weights[t] / total, Rational(num(rng)), Rational(num(rng)), false});
        PersuasionInstance inst;
        for (int i = 0; i < n; ++i) inst.actions.push_back(shared);

        // random scheme that always recommends some action
        Scheme raw;
        for (long p = 0; p < inst.num_profiles(); ++p) {
            std::vector<Rational> row(n + 1, Rational(0));
            Rational rtot(0);
            for (int i = 0; i < n; ++i) {
                row[i] = Rational(num(rng) + 1, 1);
                rtot += row[i];
            }
            for (int i = 0; i < n; ++i) row[i] /= rtot;
            raw.rec.push_back(std::move(row));
        }
        Scheme sym = symmetrize(inst, raw);
        auto rule = second_order_from_scheme(inst, sym);
        for (int t = 0; t < types; ++t) {
            Rational y = rule.x[0][0][t];
            Rational z = rule.x[1][0][t];
            // symmetric: off-diagonal entries all agree
            for (int i = 1; i < n; ++i) CHECK(rule.x[i][0][t] == z);
            CHECK(Rational(n - 1) * z + y == Rational(1));
        }
    }
}

TEST_CASE("table-1 verifier") {
    Table1Trace trace = verify_table1_no_dice();
    CHECK(trace.steps.size() == 8);
    CHECK(trace.contradiction);
    CHECK(trace.all_checks_passed);
    CHECK(trace.pr_a == Rational(3, 8));
    CHECK(trace.pr_b == Rational(99, 200));
    CHECK(trace.x_aa1 == Rational(3, 4));
}
