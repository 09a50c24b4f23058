#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>

namespace osn {

/// Integer-valued frequency distribution. Only values with count >= 1 are
/// stored.
class Histogram {
public:
    using Bins = std::map<std::int64_t, std::uint64_t>;

    Histogram() = default;
    static Histogram from_values(std::span<const std::int64_t> values);

    void add(std::int64_t value, std::uint64_t count = 1);
    /// Adds every bin of `other` (order-independent merge).
    void merge(const Histogram& other);

    const Bins& bins() const noexcept { return bins_; }
    std::uint64_t total() const noexcept { return total_; }
    bool empty() const noexcept { return bins_.empty(); }
    std::size_t distinct() const noexcept { return bins_.size(); }
    std::uint64_t count(std::int64_t value) const;

    /// Sum of value * count; exact.
    __int128 weighted_sum() const;
    double mean() const;
    std::optional<std::int64_t> min() const;
    std::optional<std::int64_t> max() const;

    bool operator==(const Histogram&) const = default;

private:
    Bins bins_;
    std::uint64_t total_ = 0;
};

/// Two-column "value count" text, one bin per line, preceded by optional
/// '#' comment lines. Loadable by gnuplot and by read_two_column().
void write_two_column(std::ostream& out, const Histogram& h, const char* comment = nullptr);
Histogram read_two_column(std::istream& in);

}  // namespace osn
