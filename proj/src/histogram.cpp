#include "osn/histogram.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "osn/error.hpp"

namespace osn {

Histogram Histogram::from_values(std::span<const std::int64_t> values) {
    Histogram h;
    for (auto v : values) h.add(v);
    return h;
}

void Histogram::add(std::int64_t value, std::uint64_t count) {
    if (count == 0) return;
    bins_[value] += count;
    total_ += count;
}

void Histogram::merge(const Histogram& other) {
    for (auto [v, c] : other.bins_) add(v, c);
}

std::uint64_t Histogram::count(std::int64_t value) const {
    const auto it = bins_.find(value);
    return it == bins_.end() ? 0 : it->second;
}

__int128 Histogram::weighted_sum() const {
    __int128 sum = 0;
    for (auto [v, c] : bins_) sum += static_cast<__int128>(v) * c;
    return sum;
}

double Histogram::mean() const {
    if (total_ == 0) return 0.0;
    return static_cast<double>(weighted_sum()) / static_cast<double>(total_);
}

std::optional<std::int64_t> Histogram::min() const {
    if (bins_.empty()) return std::nullopt;
    return bins_.begin()->first;
}

std::optional<std::int64_t> Histogram::max() const {
    if (bins_.empty()) return std::nullopt;
    return bins_.rbegin()->first;
}

void write_two_column(std::ostream& out, const Histogram& h, const char* comment) {
    if (comment) out << "# " << comment << '\n';
    for (auto [v, c] : h.bins()) out << v << ' ' << c << '\n';
}

Histogram read_two_column(std::istream& in) {
    Histogram h;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::int64_t value = 0;
        std::uint64_t count = 0;
        std::string extra;
        if (!(fields >> value >> count) || (fields >> extra)) {
            throw ParseError("expected 'value count'", line_no);
        }
        h.add(value, count);
    }
    return h;
}

}  // namespace osn
