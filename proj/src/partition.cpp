#include "geocluster/partition.hpp"

#include <algorithm>
#include <unordered_map>


namespace geocluster {

std::vector<int> Partition::community_sizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(community_count), 0);
    for (int c : assignment) ++sizes[static_cast<std::size_t>(c)];
    return sizes;
}

Partition canonical_partition(std::span<const int> ids) {
    Partition p;
    p.assignment.reserve(ids.size());
    std::unordered_map<int, int> relabel;
    for (int id : ids) {
        auto [it, inserted] = relabel.try_emplace(id, static_cast<int>(relabel.size()));
        p.assignment.push_back(it->second);
    }
    p.community_count = static_cast<int>(relabel.size());
    return p;
}

Partition compact_partition(std::span<const int> ids) {
    std::vector<int> distinct(ids.begin(), ids.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    Partition p;
    p.assignment.reserve(ids.size());
    for (int id : ids) {
        const auto pos = std::lower_bound(distinct.begin(), distinct.end(), id) - distinct.begin();
        p.assignment.push_back(static_cast<int>(pos));
    }
    p.community_count = static_cast<int>(distinct.size());
    return p;
}

bool is_valid(const Partition& p) {
    if (p.community_count < 0) return false;
    std::vector<char> seen(static_cast<std::size_t>(p.community_count), 0);
    for (int c : p.assignment) {
        if (c < 0 || c >= p.community_count) return false;
        seen[static_cast<std::size_t>(c)] = 1;
    }
    return std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });
}

}  // namespace geocluster
