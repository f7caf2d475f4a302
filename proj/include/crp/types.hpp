#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace crp {

using ObjectIndex = std::size_t;
using ExitIndex = std::size_t;

inline constexpr std::size_t kMaxObjects = 64;

/// Set of objects still in the workspace.
class RemainingSet
{
public:
    constexpr RemainingSet() = default;
    constexpr explicit RemainingSet(std::uint64_t bits) : bits_(bits) {}

    static RemainingSet all(std::size_t n)
    {
        if (n > kMaxObjects)
        {
            throw std::invalid_argument("RemainingSet supports at most 64 objects");
        }
        return RemainingSet(n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
    }
    static RemainingSet of(std::initializer_list<ObjectIndex> items)
    {
        RemainingSet s;
        for (auto i : items)
        {
            s = s.with(i);
        }
        return s;
    }

    [[nodiscard]] constexpr std::uint64_t bits() const { return bits_; }
    [[nodiscard]] constexpr bool contains(ObjectIndex i) const { return (bits_ >> i) & 1U; }
    [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
    [[nodiscard]] constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    [[nodiscard]] constexpr RemainingSet without(ObjectIndex i) const { return RemainingSet(bits_ & ~(std::uint64_t{1} << i)); }
    [[nodiscard]] constexpr RemainingSet with(ObjectIndex i) const { return RemainingSet(bits_ | (std::uint64_t{1} << i)); }
    [[nodiscard]] constexpr bool subset_of(RemainingSet o) const { return (bits_ & ~o.bits_) == 0; }
    [[nodiscard]] constexpr RemainingSet operator&(RemainingSet o) const { return RemainingSet(bits_ & o.bits_); }
    [[nodiscard]] constexpr RemainingSet operator|(RemainingSet o) const { return RemainingSet(bits_ | o.bits_); }
    [[nodiscard]] constexpr RemainingSet minus(RemainingSet o) const { return RemainingSet(bits_ & ~o.bits_); }
    friend constexpr bool operator==(RemainingSet, RemainingSet) = default;

    [[nodiscard]] std::vector<ObjectIndex> indices() const
    {
        std::vector<ObjectIndex> out;
        for (std::uint64_t b = bits_; b != 0; b &= b - 1)
        {
            out.push_back(static_cast<ObjectIndex>(std::countr_zero(b)));
        }
        return out;
    }

private:
    std::uint64_t bits_ = 0;
};

struct SearchState
{
    RemainingSet remaining;
    ExitIndex exit = 0;

    friend bool operator==(const SearchState&, const SearchState&) = default;
};

struct SearchStateHash
{
    std::size_t operator()(const SearchState& s) const noexcept
    {
        std::uint64_t h = s.remaining.bits() * 0x9E3779B97F4A7C15ULL;
        h ^= (static_cast<std::uint64_t>(s.exit) + 0x632BE59BD9B4E019ULL) + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h ^ (h >> 31));
    }
};

}  // namespace crp
