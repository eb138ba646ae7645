#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ldstat {

/// Mutant counts from n replicate cultures, with the frequency table of
/// distinct values (sorted ascending).
class Sample {
public:
    explicit Sample(std::vector<std::int64_t> counts);

    std::span<const std::int64_t> counts() const noexcept { return counts_; }
    std::size_t size() const noexcept { return counts_.size(); }
    std::int64_t max() const noexcept { return max_; }
    std::int64_t zeros() const noexcept { return count_of(0); }
    std::int64_t count_of(std::int64_t value) const noexcept;

    /// (value, multiplicity) pairs, ascending by value; multiplicities sum to n.
    const std::vector<std::pair<std::int64_t, std::int64_t>>& frequencies() const noexcept {
        return freq_;
    }

    /// Order statistic X_(ceil(q n)) of the sorted sample, q in (0, 1].
    std::int64_t quantile(double q) const;

private:
    std::vector<std::int64_t> counts_;
    std::vector<std::pair<std::int64_t, std::int64_t>> freq_;
    std::int64_t max_ = 0;
};

/// Reads one non-negative integer per line. Blank lines and lines starting with
/// '#' are skipped; a first data line reading "count" is taken as a CSV header.
/// Throws InputError naming the offending line.
Sample read_sample(std::istream& in);
Sample read_sample_file(const std::string& path);

}  // namespace ldstat
