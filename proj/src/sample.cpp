#include "ldstat/sample.hpp"

#include "ldstat/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace ldstat {

Sample::Sample(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
    if (counts_.empty()) throw InputError("sample is empty", 0);
    std::vector<std::int64_t> sorted = counts_;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0) throw InputError("sample contains a negative count", 0);
    max_ = sorted.back();
    for (std::int64_t v : sorted) {
        if (!freq_.empty() && freq_.back().first == v)
            ++freq_.back().second;
        else
            freq_.emplace_back(v, 1);
    }
}

std::int64_t Sample::count_of(std::int64_t value) const noexcept {
    auto it = std::lower_bound(freq_.begin(), freq_.end(), value,
                               [](const auto& entry, std::int64_t v) { return entry.first < v; });
    return (it != freq_.end() && it->first == value) ? it->second : 0;
}

std::int64_t Sample::quantile(double q) const {
    if (!(q > 0.0 && q <= 1.0)) throw DomainError("sample quantile level must lie in (0,1]");
    const auto n = static_cast<double>(counts_.size());
    auto rank = static_cast<std::int64_t>(std::ceil(q * n - 1e-9));
    rank = std::clamp<std::int64_t>(rank, 1, static_cast<std::int64_t>(counts_.size()));
    std::int64_t seen = 0;
    for (const auto& [value, mult] : freq_) {
        seen += mult;
        if (seen >= rank) return value;
    }
    return max_;
}

Sample read_sample(std::istream& in) {
    std::vector<std::int64_t> counts;
    std::string line;
    std::size_t line_no = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string_view field(line.data() + first, last - first + 1);
        if (field.front() == '#') continue;
        if (header_allowed && field == "count") {
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        std::int64_t value = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec == std::errc::result_out_of_range)
            throw InputError("count out of range: '" + std::string(field) + "'", line_no);
        if (ec != std::errc() || ptr != field.data() + field.size())
            throw InputError("expected a non-negative integer, got '" + std::string(field) + "'",
                             line_no);
        if (value < 0)
            throw InputError("negative count '" + std::string(field) + "'", line_no);
        counts.push_back(value);
    }
    if (counts.empty()) throw InputError("no counts found", 0);
    return Sample(std::move(counts));
}

Sample read_sample_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'", 0);
    return read_sample(in);
}

}  // namespace ldstat
