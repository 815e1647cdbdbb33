#include "brane/index_set.hpp"

#include "brane/errors.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace brane {

IndexSet::IndexSet(int bound) : bound_(bound)
{
    if (bound < 0 || bound > max_bound) {
        throw DomainError("IndexSet bound " + std::to_string(bound) + " outside [0, 30]");
    }
}

IndexSet::IndexSet(int bound, std::initializer_list<int> elements)
    : IndexSet(bound, std::vector<int>(elements))
{
}

IndexSet::IndexSet(int bound, const std::vector<int>& elements) : IndexSet(bound)
{
    int previous = 0;
    for (int e : elements) {
        check_element(e);
        if (e <= previous) {
            throw DomainError("IndexSet elements must be strictly increasing");
        }
        mask_ |= std::uint32_t{1} << (e - 1);
        previous = e;
    }
}

IndexSet IndexSet::from_mask(int bound, std::uint32_t mask)
{
    IndexSet s(bound);
    if (bound < 32 && (mask >> bound) != 0) {
        throw DomainError("IndexSet mask has elements beyond bound");
    }
    s.mask_ = mask;
    return s;
}

int IndexSet::size() const noexcept { return std::popcount(mask_); }

bool IndexSet::contains(int e) const noexcept
{
    return e >= 1 && e <= bound_ && ((mask_ >> (e - 1)) & 1u) != 0;
}

int IndexSet::at(int p) const
{
    if (p < 1 || p > size()) {
        throw DomainError("IndexSet position out of range");
    }
    std::uint32_t m = mask_;
    for (int q = 1; q < p; ++q) {
        m &= m - 1;
    }
    return std::countr_zero(m) + 1;
}

int IndexSet::position(int e) const
{
    if (!contains(e)) {
        throw DomainError("IndexSet::position of absent element");
    }
    return ordinal(*this, e);
}

IndexSet IndexSet::with(int e) const
{
    check_element(e);
    IndexSet s = *this;
    s.mask_ |= std::uint32_t{1} << (e - 1);
    return s;
}

IndexSet IndexSet::without(int e) const
{
    check_element(e);
    IndexSet s = *this;
    s.mask_ &= ~(std::uint32_t{1} << (e - 1));
    return s;
}

std::vector<int> IndexSet::elements() const
{
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
        out.push_back(std::countr_zero(m) + 1);
    }
    return out;
}

bool IndexSet::lex_less(const IndexSet& other) const
{
    const auto a = elements();
    const auto b = other.elements();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string IndexSet::to_string() const
{
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int e : elements()) {
        os << (first ? "" : ",") << e;
        first = false;
    }
    os << '}';
    return os.str();
}

void IndexSet::check_element(int e) const
{
    if (e < 1 || e > bound_) {
        throw DomainError("index " + std::to_string(e) + " outside [1, " + std::to_string(bound_) +
                          "]");
    }
}

int ordinal(const IndexSet& a, int alpha)
{
    if (alpha < 1 || alpha > a.bound()) {
        throw DomainError("ordinal: index " + std::to_string(alpha) + " outside [1, " +
                          std::to_string(a.bound()) + "]");
    }
    const std::uint32_t below = (std::uint32_t{1} << (alpha - 1)) - 1;
    return std::popcount(a.mask() & below) + 1;
}

std::vector<IndexSet> subsets_of_size(int bound, int k)
{
    std::vector<IndexSet> out;
    if (k < 0 || k > bound) {
        return out;
    }
    std::vector<int> comb(static_cast<std::size_t>(k));
    for (int p = 0; p < k; ++p) {
        comb[static_cast<std::size_t>(p)] = p + 1;
    }
    while (true) {
        out.emplace_back(bound, comb);
        int p = k - 1;
        while (p >= 0 && comb[static_cast<std::size_t>(p)] == bound - k + p + 1) {
            --p;
        }
        if (p < 0) {
            break;
        }
        ++comb[static_cast<std::size_t>(p)];
        for (int q = p + 1; q < k; ++q) {
            comb[static_cast<std::size_t>(q)] = comb[static_cast<std::size_t>(q - 1)] + 1;
        }
    }
    return out;
}

} // namespace brane
