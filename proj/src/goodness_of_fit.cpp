#include "ldstat/goodness_of_fit.hpp"

#include "ldstat/errors.hpp"
#include "ldstat/numerics.hpp"

#include <cmath>
#include <vector>

namespace ldstat {

namespace {

struct Binned {
    std::vector<double> observed;  // frequencies
    std::vector<double> expected;  // probabilities
};

Binned bin(std::span<const std::int64_t> counts, const PmfTable& table, std::size_t max_bin) {
    if (counts.empty()) throw DomainError("goodness of fit needs at least one observation");
    if (table.max_index() < max_bin)
        throw DomainError("pmf table is shorter than the requested binning");
    Binned b;
    b.observed.assign(max_bin + 2, 0.0);
    for (std::int64_t x : counts) {
        const auto k = static_cast<std::uint64_t>(x);
        b.observed[k <= max_bin ? k : max_bin + 1] += 1.0;
    }
    for (auto& o : b.observed) o /= static_cast<double>(counts.size());
    b.expected.assign(table.q.begin(), table.q.begin() + static_cast<std::ptrdiff_t>(max_bin + 1));
    CompensatedSum head;
    for (double q : b.expected) head += q;
    b.expected.push_back(std::max(0.0, 1.0 - head.value()));
    return b;
}

}  // namespace

double total_variation(std::span<const std::int64_t> counts, const PmfTable& table,
                       std::size_t max_bin) {
    const Binned b = bin(counts, table, max_bin);
    CompensatedSum tv;
    for (std::size_t i = 0; i < b.observed.size(); ++i)
        tv += std::fabs(b.observed[i] - b.expected[i]);
    return 0.5 * tv.value();
}

ChiSquare chi_square(std::span<const std::int64_t> counts, const PmfTable& table,
                     std::size_t max_bin) {
    const Binned b = bin(counts, table, max_bin);
    const auto n = static_cast<double>(counts.size());
    ChiSquare out;
    CompensatedSum stat;
    int bins = 0;
    for (std::size_t i = 0; i < b.observed.size(); ++i) {
        if (!(b.expected[i] > 0.0)) continue;
        const double e = n * b.expected[i];
        const double d = n * b.observed[i] - e;
        stat += d * d / e;
        ++bins;
    }
    out.statistic = stat.value();
    out.dof = bins - 1;
    out.p_value = chi_squared_survival(out.statistic, out.dof);
    return out;
}

}  // namespace ldstat
