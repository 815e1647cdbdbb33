#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace brane {

/// Ordered subset of {1, ..., bound}. Elements are 1-based; stored as a bit mask.
class IndexSet {
public:
    static constexpr int max_bound = 30;

    IndexSet() = default;
    explicit IndexSet(int bound);
    IndexSet(int bound, std::initializer_list<int> elements);
    IndexSet(int bound, const std::vector<int>& elements);

    static IndexSet from_mask(int bound, std::uint32_t mask);

    int bound() const noexcept { return bound_; }
    std::uint32_t mask() const noexcept { return mask_; }
    int size() const noexcept;
    bool empty() const noexcept { return mask_ == 0; }
    bool contains(int e) const noexcept;

    /// Element at 1-based position p.
    int at(int p) const;
    /// 1-based position of e within the set; requires contains(e).
    int position(int e) const;

    IndexSet with(int e) const;
    IndexSet without(int e) const;
    std::vector<int> elements() const;

    bool operator==(const IndexSet& other) const noexcept
    {
        return bound_ == other.bound_ && mask_ == other.mask_;
    }
    bool operator!=(const IndexSet& other) const noexcept { return !(*this == other); }

    /// Lexicographic comparison of the sorted element lists.
    bool lex_less(const IndexSet& other) const;

    std::string to_string() const;

private:
    void check_element(int e) const;

    int bound_ = 0;
    std::uint32_t mask_ = 0;
};

/// Rank of alpha in A ∪ {alpha}, 1-based. Throws DomainError when alpha is outside [1, bound].
int ordinal(const IndexSet& a, int alpha);

/// (-1)^e for an integer exponent.
constexpr int parity_sign(int e) noexcept { return (e % 2 == 0) ? 1 : -1; }

/// All subsets of {1..bound} of size k, in lexicographic order.
std::vector<IndexSet> subsets_of_size(int bound, int k);

} // namespace brane
