#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace warsim {

// Integer card rank. Rank 0 is the empty-hand marker in f-war; the p-war
// engine uses a separate sentinel for unplayed cards instead.
using Rank = int;

// Hand-size vector: m nonnegative entries summing to n. This is the state of
// the sticky random walk and the size projection of every card-level game.
class Composition {
public:
    explicit Composition(std::vector<int> sizes) : sizes_(std::move(sizes)) {
        if (sizes_.size() < 2)
            throw std::invalid_argument("Composition: need at least 2 players");
        total_ = 0;
        for (int s : sizes_) {
            if (s < 0) throw std::invalid_argument("Composition: negative hand size");
            total_ += s;
        }
        if (total_ < 1) throw std::invalid_argument("Composition: total must be at least 1");
    }

    static Composition equal_split(int n, int m) {
        if (m < 2) throw std::invalid_argument("Composition: need at least 2 players");
        if (n < 1) throw std::invalid_argument("Composition: total must be at least 1");
        if (n % m != 0)
            throw std::invalid_argument("Composition: equal split requires m | n");
        return Composition(std::vector<int>(static_cast<std::size_t>(m), n / m));
    }

    std::size_t players() const { return sizes_.size(); }
    long long total() const { return total_; }
    int operator[](std::size_t i) const { return sizes_[i]; }
    const std::vector<int>& sizes() const { return sizes_; }

    std::size_t support_count() const {
        std::size_t k = 0;
        for (int s : sizes_)
            if (s > 0) ++k;
        return k;
    }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < sizes_.size(); ++i)
            if (sizes_[i] > 0) idx.push_back(i);
        return idx;
    }

    bool is_absorbing() const { return support_count() == 1; }

    long long sum_of_squares() const {
        long long s = 0;
        for (int v : sizes_) s += static_cast<long long>(v) * v;
        return s;
    }

    bool operator==(const Composition& other) const { return sizes_ == other.sizes_; }

    std::string to_string() const {
        std::string out = "(";
        for (std::size_t i = 0; i < sizes_.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(sizes_[i]);
        }
        out += ")";
        return out;
    }

private:
    std::vector<int> sizes_;
    long long total_ = 0;
};

}  // namespace warsim
