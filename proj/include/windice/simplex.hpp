#pragma once

#include <stdexcept>
#include <vector>

#include "windice/scalar.hpp"

namespace windice {

// Small dense LP in exact rational arithmetic:
//   maximize c^T x  subject to  a_i x {<=,=,>=} b_i,  x >= 0.
// Two-phase simplex with Bland's rule; sized for desk-scale instances.
struct LinearProgram {
    enum class Rel { Le, Eq, Ge };
    struct Constraint {
        std::vector<Rational> a;
        Rel rel = Rel::Le;
        Rational b;
    };
    std::vector<Rational> objective;
    std::vector<Constraint> constraints;
};

struct LpSolution {
    enum class Status { Optimal, Infeasible, Unbounded } status = Status::Optimal;
    Rational value;
    std::vector<Rational> x;
};

namespace detail {

class SimplexTableau {
public:
    SimplexTableau(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs,
                   std::vector<int> basis)
        : rows_(std::move(rows)), rhs_(std::move(rhs)), basis_(std::move(basis)) {}

    // Maximizes c over the current feasible basis; returns false on
    // unboundedness.
    bool maximize(const std::vector<Rational>& c) {
        const int m = static_cast<int>(rows_.size());
        const int n = static_cast<int>(c.size());
        while (true) {
            // reduced costs r_j = c_j - c_B . column_j
            int entering = -1;
            for (int j = 0; j < n && entering < 0; ++j) {
                Rational r = c[j];
                for (int i = 0; i < m; ++i) r -= c[basis_[i]] * rows_[i][j];
                if (r > Rational(0)) entering = j;  // Bland: smallest index
            }
            if (entering < 0) return true;
            int leave = -1;
            Rational best_ratio(0);
            for (int i = 0; i < m; ++i) {
                if (!(rows_[i][entering] > Rational(0))) continue;
                Rational ratio = rhs_[i] / rows_[i][entering];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, entering);
        }
    }

    void pivot(int row, int col) {
        Rational inv = Rational(1) / rows_[row][col];
        for (auto& v : rows_[row]) v *= inv;
        rhs_[row] *= inv;
        for (size_t i = 0; i < rows_.size(); ++i) {
            if (static_cast<int>(i) == row) continue;
            Rational factor = rows_[i][col];
            if (factor == Rational(0)) continue;
            for (size_t j = 0; j < rows_[i].size(); ++j) rows_[i][j] -= factor * rows_[row][j];
            rhs_[i] -= factor * rhs_[row];
        }
        basis_[row] = col;
    }

    std::vector<std::vector<Rational>>& rows() { return rows_; }
    std::vector<Rational>& rhs() { return rhs_; }
    std::vector<int>& basis() { return basis_; }

private:
    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> rhs_;
    std::vector<int> basis_;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) {
    const int n = static_cast<int>(lp.objective.size());
    const int m = static_cast<int>(lp.constraints.size());

    // columns: n structural, then one slack/surplus per inequality, then one
    // artificial per row that needs it
    int num_slack = 0;
    for (const auto& c : lp.constraints)
        if (c.rel != LinearProgram::Rel::Eq) ++num_slack;
    int width = n + num_slack;

    std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(width, Rational(0)));
    std::vector<Rational> rhs(m);
    std::vector<int> basis(m, -1);
    std::vector<int> artificial_of(m, -1);

    int slack_at = n;
    for (int i = 0; i < m; ++i) {
        const auto& con = lp.constraints[i];
        if (static_cast<int>(con.a.size()) != n)
            throw std::invalid_argument("constraint arity mismatch");
        bool flip = con.b < Rational(0);
        for (int j = 0; j < n; ++j) rows[i][j] = flip ? -con.a[j] : con.a[j];
        rhs[i] = flip ? -con.b : con.b;
        LinearProgram::Rel rel = con.rel;
        if (flip) {
            if (rel == LinearProgram::Rel::Le) rel = LinearProgram::Rel::Ge;
            else if (rel == LinearProgram::Rel::Ge) rel = LinearProgram::Rel::Le;
        }
        if (rel == LinearProgram::Rel::Le) {
            rows[i][slack_at] = Rational(1);
            basis[i] = slack_at++;
        } else if (rel == LinearProgram::Rel::Ge) {
            rows[i][slack_at] = Rational(-1);
            ++slack_at;
        }
    }
    // artificials where no slack gives a starting basis
    std::vector<int> art_cols;
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= 0) continue;
        for (auto& row : rows) row.push_back(Rational(0));
        rows[i][width] = Rational(1);
        basis[i] = width;
        artificial_of[i] = width;
        art_cols.push_back(width);
        ++width;
    }

    detail::SimplexTableau tableau(std::move(rows), std::move(rhs), std::move(basis));

    if (!art_cols.empty()) {
        std::vector<Rational> phase1(width, Rational(0));
        for (int col : art_cols) phase1[col] = Rational(-1);
        tableau.maximize(phase1);
        Rational value(0);
        for (size_t i = 0; i < tableau.basis().size(); ++i)
            value += phase1[tableau.basis()[i]] * tableau.rhs()[i];
        if (value != Rational(0)) return {LpSolution::Status::Infeasible, Rational(0), {}};
        // pivot residual artificials out of the basis where possible
        for (size_t i = 0; i < tableau.basis().size(); ++i) {
            bool is_art = false;
            for (int col : art_cols) is_art = is_art || tableau.basis()[i] == col;
            if (!is_art) continue;
            for (int j = 0; j < n + num_slack; ++j) {
                if (tableau.rows()[i][j] != Rational(0)) {
                    tableau.pivot(static_cast<int>(i), j);
                    break;
                }
            }
        }
    }

    std::vector<Rational> phase2(width, Rational(0));
    for (int j = 0; j < n; ++j) phase2[j] = lp.objective[j];
    // artificial columns must stay out of play
    for (int col : art_cols) phase2[col] = Rational(-1000000);
    if (!tableau.maximize(phase2)) return {LpSolution::Status::Unbounded, Rational(0), {}};

    LpSolution sol;
    sol.status = LpSolution::Status::Optimal;
    sol.x.assign(n, Rational(0));
    for (size_t i = 0; i < tableau.basis().size(); ++i)
        if (tableau.basis()[i] < n) sol.x[tableau.basis()[i]] = tableau.rhs()[i];
    for (int j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.x[j];
    return sol;
}

}  // namespace windice
