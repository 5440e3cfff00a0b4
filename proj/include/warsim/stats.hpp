#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace warsim {

// Aggregated termination statistics for one experiment.
struct SimSummary {
    long long replications = 0;
    long long completed = 0;
    long long censored = 0;
    double mean_rounds = 0.0;
    double std_error = 0.0;
    double median_rounds = 0.0;
    long long max_rounds = 0;
    bool approximate_quantiles = false;
    std::vector<std::pair<long long, long long>> histogram;  // (bin_lower, count)
};

// Mergeable accumulator of integer round counts. Sums and sums of squares
// are kept as exact integers, so the reported mean and standard error do not
// depend on merge order or thread count. Values are retained in full for
// exact quantiles up to `reservoir_limit`; beyond that a deterministic
// stratified reservoir keyed by replication index (index % stride == 0) takes
// over and the summary is flagged approximate.
class Accumulator {
public:
    static constexpr long long kDefaultReservoirLimit = 1'000'000;

    explicit Accumulator(long long bin_width = 50, long long expected_replications = 0,
                         long long reservoir_limit = kDefaultReservoirLimit)
        : bin_width_(bin_width), stride_(1) {
        if (bin_width_ < 1) throw std::invalid_argument("Accumulator: bin width must be >= 1");
        if (reservoir_limit < 1) throw std::invalid_argument("Accumulator: reservoir limit must be >= 1");
        if (expected_replications > reservoir_limit)
            stride_ = (expected_replications + reservoir_limit - 1) / reservoir_limit;
    }

    void record(long long rounds, long long replication_index) {
        if (rounds < 0) throw std::invalid_argument("Accumulator: negative round count");
        ++count_;
        sum_ += rounds;
        sum_sq_ += static_cast<unsigned __int128>(rounds) * static_cast<unsigned __int128>(rounds);
        max_ = std::max(max_, rounds);
        ++bins_[(rounds / bin_width_) * bin_width_];
        if (replication_index % stride_ == 0) values_.push_back(rounds);
    }

    void record_censored() { ++censored_; }

    void merge(const Accumulator& other) {
        if (other.bin_width_ != bin_width_ || other.stride_ != stride_)
            throw std::invalid_argument("Accumulator: merging incompatible accumulators");
        count_ += other.count_;
        censored_ += other.censored_;
        sum_ += other.sum_;
        sum_sq_ += other.sum_sq_;
        max_ = std::max(max_, other.max_);
        for (const auto& [lower, cnt] : other.bins_) bins_[lower] += cnt;
        values_.insert(values_.end(), other.values_.begin(), other.values_.end());
    }

    long long count() const { return count_; }
    long long censored() const { return censored_; }
    long long bin_width() const { return bin_width_; }

    SimSummary summarize() const {
        if (count_ == 0) throw std::invalid_argument("summarize: empty accumulator");
        SimSummary s;
        s.replications = count_ + censored_;
        s.completed = count_;
        s.censored = censored_;
        const double n = static_cast<double>(count_);
        s.mean_rounds = static_cast<double>(sum_) / n;
        if (count_ > 1) {
            // Sample variance from exact integer moments:
            // (sum_sq - sum^2/n) / (n - 1), evaluated via the exact integer
            // numerator n*sum_sq - sum^2 to avoid cancellation.
            const unsigned __int128 nsumsq = static_cast<unsigned __int128>(count_) * sum_sq_;
            const unsigned __int128 sum2 =
                static_cast<unsigned __int128>(sum_) * static_cast<unsigned __int128>(sum_);
            const double numerator = static_cast<double>(nsumsq - sum2);
            const double variance = numerator / (n * (n - 1.0));
            s.std_error = std::sqrt(variance / n);
        }
        s.max_rounds = max_;
        s.approximate_quantiles = stride_ > 1;

        std::vector<long long> sorted = values_;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t k = sorted.size();
        if (k == 0) {
            s.median_rounds = s.mean_rounds;  // reservoir picked nothing
        } else if (k % 2 == 1) {
            s.median_rounds = static_cast<double>(sorted[k / 2]);
        } else {
            s.median_rounds = 0.5 * (static_cast<double>(sorted[k / 2 - 1]) +
                                     static_cast<double>(sorted[k / 2]));
        }
        s.histogram.assign(bins_.begin(), bins_.end());
        return s;
    }

private:
    long long bin_width_;
    long long stride_;
    long long count_ = 0;
    long long censored_ = 0;
    unsigned long long sum_ = 0;
    unsigned __int128 sum_sq_ = 0;
    long long max_ = 0;
    std::map<long long, long long> bins_;
    std::vector<long long> values_;
};

}  // namespace warsim
