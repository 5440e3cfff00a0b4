// Exact expected hitting times for the sticky walk by linear solve.
//
// States are canonicalized by sorting coordinates descending; the transition
// law is permutation-equivariant, so this collapses the composition space to
// partitions-with-zeros. The resulting system h = 1 + P h is block
// lower-triangular in support size (support never grows), so classes are
// solved in ascending support order, Gauss-Seidel within each class.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "warsim/composition.hpp"

namespace warsim {

enum class AbsorbMode {
    single_survivor,    // absorbed when one coordinate holds everything (tau)
    first_elimination,  // absorbed when any coordinate first hits zero (tau_1)
};

struct ExactSolveReport {
    std::size_t state_count = 0;
    double expected_time = 0.0;
    double residual = 0.0;
    long long iterations = 0;
};

struct SolverOptions {
    double tolerance = 1e-10;  // max absolute residual of h - (1 + P h)
    std::size_t max_states = 1'000'000;
    long long max_sweeps = 1'000'000;
};

class AbsorptionSolver {
public:
    AbsorptionSolver(int n, int m, AbsorbMode mode = AbsorbMode::single_survivor,
                     SolverOptions options = {})
        : n_(n), m_(m), mode_(mode), options_(options) {
        if (n < 1 || m < 2) throw std::invalid_argument("AbsorptionSolver: need n >= 1, m >= 2");
        enumerate_states();
        build_transitions();
        solve();
    }

    std::size_t state_count() const { return states_.size(); }
    double residual() const { return residual_; }
    long long iterations() const { return iterations_; }

    // Expected hitting time from an arbitrary start composition of (n, m).
    double value(const Composition& start) const {
        if (start.total() != n_ || static_cast<int>(start.players()) != m_)
            throw std::invalid_argument("AbsorptionSolver: start does not match (n, m)");
        std::vector<int> key = start.sizes();
        std::sort(key.begin(), key.end(), std::greater<int>());
        return h_[index_.at(key)];
    }

    ExactSolveReport report_for(const Composition& start) const {
        return {states_.size(), value(start), residual_, iterations_};
    }

private:
    bool is_absorbing(std::size_t support) const {
        return mode_ == AbsorbMode::single_survivor ? support <= 1
                                                    : support < static_cast<std::size_t>(m_);
    }

    void enumerate_states() {
        // Partitions of n into at most m parts, as descending vectors of
        // length m padded with zeros.
        std::vector<int> parts;
        std::function<void(int, int)> gen = [&](int remaining, int max_part) {
            if (static_cast<int>(parts.size()) == m_) {
                if (remaining == 0) push_state(parts);
                return;
            }
            const int slots_left = m_ - static_cast<int>(parts.size());
            for (int p = std::min(remaining, max_part); p >= 0; --p) {
                if (static_cast<long long>(p) * slots_left < remaining) break;
                parts.push_back(p);
                gen(remaining - p, p);
                parts.pop_back();
            }
        };
        gen(n_, n_);

        // Ascending support size, then lexicographic: the sweep order.
        std::sort(states_.begin(), states_.end(), [](const auto& a, const auto& b) {
            const auto sa = support_of(a), sb = support_of(b);
            if (sa != sb) return sa < sb;
            return a < b;
        });
        for (std::size_t i = 0; i < states_.size(); ++i) index_[states_[i]] = i;
    }

    void push_state(const std::vector<int>& s) {
        if (states_.size() >= options_.max_states)
            throw std::runtime_error("AbsorptionSolver: state-space limit exceeded");
        states_.push_back(s);
    }

    static std::size_t support_of(const std::vector<int>& s) {
        std::size_t k = 0;
        for (int v : s)
            if (v > 0) ++k;
        return k;
    }

    void build_transitions() {
        h_.assign(states_.size(), 0.0);
        target_offsets_.assign(states_.size() + 1, 0);
        std::vector<int> scratch;
        for (std::size_t idx = 0; idx < states_.size(); ++idx) {
            target_offsets_[idx] = targets_.size();
            const auto& s = states_[idx];
            const std::size_t k = support_of(s);
            if (is_absorbing(k)) continue;
            for (std::size_t winner = 0; winner < k; ++winner) {
                scratch = s;
                for (std::size_t j = 0; j < k; ++j) --scratch[j];
                scratch[winner] += static_cast<int>(k);
                std::sort(scratch.begin(), scratch.begin() + static_cast<long>(k),
                          std::greater<int>());
                targets_.push_back(index_.at(scratch));
            }
        }
        target_offsets_[states_.size()] = targets_.size();
    }

    void solve() {
        iterations_ = 0;
        // Group transient states by support size, ascending (already sorted).
        std::size_t begin = 0;
        while (begin < states_.size()) {
            const std::size_t k = support_of(states_[begin]);
            std::size_t end = begin;
            while (end < states_.size() && support_of(states_[end]) == k) ++end;
            if (!is_absorbing(k)) solve_class(begin, end, k);
            begin = end;
        }
        residual_ = global_residual();
    }

    void solve_class(std::size_t begin, std::size_t end, std::size_t k) {
        const double inv_k = 1.0 / static_cast<double>(k);
        while (true) {
            for (std::size_t idx = begin; idx < end; ++idx) {
                double acc = 0.0;
                for (std::size_t t = target_offsets_[idx]; t < target_offsets_[idx + 1]; ++t)
                    acc += h_[targets_[t]];
                h_[idx] = 1.0 + inv_k * acc;
            }
            ++iterations_;

            double res = 0.0;
            for (std::size_t idx = begin; idx < end; ++idx)
                res = std::max(res, std::abs(state_residual(idx, inv_k)));
            if (res <= options_.tolerance) return;
            if (iterations_ >= options_.max_sweeps)
                throw std::runtime_error("AbsorptionSolver: no convergence within sweep cap");
        }
    }

    double state_residual(std::size_t idx, double inv_k) const {
        double acc = 0.0;
        for (std::size_t t = target_offsets_[idx]; t < target_offsets_[idx + 1]; ++t)
            acc += h_[targets_[t]];
        return h_[idx] - (1.0 + inv_k * acc);
    }

    double global_residual() const {
        double res = 0.0;
        for (std::size_t idx = 0; idx < states_.size(); ++idx) {
            const std::size_t k = support_of(states_[idx]);
            if (is_absorbing(k)) continue;
            res = std::max(res, std::abs(state_residual(idx, 1.0 / static_cast<double>(k))));
        }
        return res;
    }

    int n_;
    int m_;
    AbsorbMode mode_;
    SolverOptions options_;
    std::vector<std::vector<int>> states_;
    std::map<std::vector<int>, std::size_t> index_;
    std::vector<std::size_t> targets_;
    std::vector<std::size_t> target_offsets_;
    std::vector<double> h_;
    double residual_ = 0.0;
    long long iterations_ = 0;
};

inline ExactSolveReport exact_expected_absorption(const Composition& start,
                                                  double tolerance = 1e-10) {
    SolverOptions opts;
    opts.tolerance = tolerance;
    AbsorptionSolver solver(static_cast<int>(start.total()), static_cast<int>(start.players()),
                            AbsorbMode::single_survivor, opts);
    return solver.report_for(start);
}

inline ExactSolveReport expected_first_elimination(const Composition& start,
                                                   double tolerance = 1e-10) {
    SolverOptions opts;
    opts.tolerance = tolerance;
    AbsorptionSolver solver(static_cast<int>(start.total()), static_cast<int>(start.players()),
                            AbsorbMode::first_elimination, opts);
    return solver.report_for(start);
}

}  // namespace warsim
