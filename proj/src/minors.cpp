#include "brane/minors.hpp"

#include <string>

namespace brane {

MinorLayout::MinorLayout(int m, int n) : m_(m), n_(n)
{
    if (m < 1 || n < 1) {
        throw DomainError("enumerate_layout: need m >= 1 and n >= 1, got (" + std::to_string(m) +
                          ", " + std::to_string(n) + ")");
    }
    if (m > max_dim || n > max_dim) {
        throw DomainError("enumerate_layout: dimensions above 8 are not supported");
    }
    lookup_.assign(std::size_t{1} << (m + n), -1);
    for (int k = 1; k <= rank(); ++k) {
        const auto row_sets = subsets_of_size(m, k);
        const auto col_sets = subsets_of_size(n, k);
        for (const auto& a : row_sets) {
            for (const auto& i : col_sets) {
                lookup_[(static_cast<std::size_t>(a.mask()) << n) | i.mask()] =
                    static_cast<int>(pairs_.size());
                pairs_.push_back({a, i});
            }
        }
    }
}

int MinorLayout::index_of(const IndexSet& a, const IndexSet& i) const noexcept
{
    if (a.empty() || a.size() != i.size()) {
        return -1;
    }
    if ((a.mask() >> m_) != 0 || (i.mask() >> n_) != 0) {
        return -1;
    }
    return lookup_[(static_cast<std::size_t>(a.mask()) << n_) | i.mask()];
}

MinorLayout enumerate_layout(int m, int n) { return MinorLayout(m, n); }

long binomial(int a, int b)
{
    if (b < 0 || b > a) {
        return 0;
    }
    long out = 1;
    for (int k = 1; k <= b; ++k) {
        out = out * (a - b + k) / k;
    }
    return out;
}

} // namespace brane
