#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "windice/evaluate.hpp"

namespace windice {

namespace detail {

// Winning probability of one candidate, with the exact tie-permutation
// average only when tied positive scores exist.
inline double win_probability_of(const Matroid& m, const std::vector<double>& scores, int who) {
    const int n = static_cast<int>(scores.size());
    int order[32];
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order, order + n, [&](int a, int b) { return scores[a] > scores[b]; });
    bool tied = false;
    for (int i = 0; i + 1 < n && !tied; ++i)
        tied = scores[order[i]] > 0 && scores[order[i]] == scores[order[i + 1]];
    if (!tied) {
        CandidateSet winners = 0;
        for (int i = 0; i < n; ++i) {
            int c = order[i];
            if (!(scores[c] > 0)) break;
            CandidateSet next = winners | (CandidateSet(1) << c);
            if (m.independent(next)) winners = next;
        }
        return static_cast<double>((winners >> who) & 1);
    }
    return tie_averaged_win_probs<double>(m, scores)[who];
}

// Contribution matrix of the target die: entry (t, s) is the interim
// probability of type t when the target die is a point mass on its s-th
// face. Win probabilities are linear in the target die's distribution, so
// q * p reproduces the interim rule of the original system.
inline Eigen::MatrixXd face_contributions(const Environment<double>& env,
                                          const DiceSystem<double>& dice, int target) {
    const int m = env.num_types();
    const int n = env.num_candidates();
    const int tc = env.candidate_of(target);
    const auto& tfaces = dice.at(target).faces();
    const int k = static_cast<int>(tfaces.size());

    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, k);
    std::vector<double> scores(n, kLosingFace);

    for (int forced = 0; forced < m; ++forced) {
        const int fc = env.candidate_of(forced);
        double constant = 0;  // profiles that never roll the target die
        Eigen::VectorXd symbol = Eigen::VectorXd::Zero(k);

        std::function<void(int, double, bool)> recurse = [&](int c, double w, bool pending) {
            if (c == n) {
                if (pending) {
                    for (int s = 0; s < k; ++s) {
                        scores[tc] = tfaces[s].value;
                        symbol(s) += w * win_probability_of(env.matroid(), scores, fc);
                    }
                } else {
                    constant += w * win_probability_of(env.matroid(), scores, fc);
                }
                return;
            }
            auto with_faces = [&](int type, double wt) {
                for (const auto& face : dice.at(type).faces()) {
                    scores[c] = face.value;
                    recurse(c + 1, wt * as_double(face.prob), pending);
                }
            };
            if (c == fc) {
                if (forced == target)
                    recurse(c + 1, w, true);
                else
                    with_faces(forced, w);
            } else {
                for (int l = 0; l < env.types_of(c); ++l) {
                    int type = env.offset(c) + l;
                    double ft = env.prior_of(c)[l];
                    if (ft <= 0) continue;
                    if (type == target)
                        recurse(c + 1, w * ft, true);
                    else
                        with_faces(type, w * ft);
                }
            }
        };
        recurse(0, 1.0, false);
        for (int s = 0; s < k; ++s) q(forced, s) = symbol(s) + constant;
    }
    return q;
}

}  // namespace detail

// Replaces the die of `target_type` with one supported on at most m+1 of its
// original faces (m = total type count), preserving every interim
// probability. The face contributions plus the mass row form an (m+1)-row
// system; Caratheodory elimination walks along null-space directions,
// zeroing one support coordinate at a time.
inline DiceSystem<double> reduce_faces(const Environment<double>& env,
                                       const DiceSystem<double>& dice, int target_type,
                                       double residual_tol = 1e-8) {
    dice.validate(env);
    const int m = env.num_types();
    const auto& faces = dice.at(target_type).faces();
    const int k = static_cast<int>(faces.size());
    if (k <= m + 1) return dice;

    Eigen::MatrixXd contrib(m + 1, k);
    contrib.topRows(m) = detail::face_contributions(env, dice, target_type);
    contrib.row(m).setOnes();  // mass row

    Eigen::VectorXd p(k);
    for (int s = 0; s < k; ++s) p(s) = as_double(faces[s].prob);
    const Eigen::VectorXd target = contrib * p;

    std::vector<int> alive(k);
    for (int s = 0; s < k; ++s) alive[s] = s;

    while (static_cast<int>(alive.size()) > m + 1) {
        Eigen::MatrixXd a(m + 1, alive.size());
        for (size_t col = 0; col < alive.size(); ++col) a.col(col) = contrib.col(alive[col]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        Eigen::MatrixXd kernel = lu.kernel();
        if (kernel.cols() == 0 || kernel.col(0).cwiseAbs().maxCoeff() == 0.0) break;
        Eigen::VectorXd z = kernel.col(0);

        // orient the step so the largest-magnitude null coordinate shrinks
        int pivot = 0;
        z.cwiseAbs().maxCoeff(&pivot);
        if (z(pivot) > 0) z = -z;

        double gamma = std::numeric_limits<double>::infinity();
        for (size_t col = 0; col < alive.size(); ++col)
            if (z(col) < 0) gamma = std::min(gamma, p(alive[col]) / -z(col));
        if (!std::isfinite(gamma)) break;
        for (size_t col = 0; col < alive.size(); ++col) p(alive[col]) += gamma * z(col);

        std::vector<int> next;
        for (size_t col = 0; col < alive.size(); ++col) {
            if (p(alive[col]) <= 1e-13)
                p(alive[col]) = 0;
            else
                next.push_back(alive[col]);
        }
        if (next.size() == alive.size()) break;  // no coordinate reached zero
        alive = std::move(next);
    }

    double residual = 0;
    {
        Eigen::VectorXd now = Eigen::VectorXd::Zero(m + 1);
        for (int s : alive) now += contrib.col(s) * p(s);
        residual = (now - target).cwiseAbs().maxCoeff();
    }
    if (static_cast<int>(alive.size()) > m + 1 || residual > residual_tol) {
        std::ostringstream msg;
        msg << "reduce_faces: elimination failed (support " << alive.size() << ", residual "
            << residual << ")";
        throw std::runtime_error(msg.str());
    }

    std::vector<Face<double>> reduced;
    double total = 0;
    for (int s : alive) total += p(s);
    for (int s : alive) reduced.push_back({faces[s].value, p(s) / total});

    DiceSystem<double> out = dice;
    out.die[target_type] = Die<double>(std::move(reduced));
    return out;
}

// Reduces every die in turn; each die ends with at most m+1 faces.
inline DiceSystem<double> reduce_all_faces(const Environment<double>& env, DiceSystem<double> dice,
                                           double residual_tol = 1e-8) {
    for (int g = 0; g < env.num_types(); ++g) dice = reduce_faces(env, dice, g, residual_tol);
    return dice;
}

}  // namespace windice
