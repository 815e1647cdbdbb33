#include "brane/state.hpp"

namespace brane {

std::string StateLayout::slot_name(int slot) const
{
    if (slot == tau_slot()) {
        return "tau";
    }
    if (slot <= m_) {
        return "d" + std::to_string(slot);
    }
    if (slot < first_minor_slot()) {
        return "v" + std::to_string(slot - m_);
    }
    const auto& pr = minors_.pair(slot - first_minor_slot());
    return "m" + pr.rows.to_string() + pr.cols.to_string();
}

} // namespace brane
