#pragma once

#include <span>
#include <vector>

namespace geocluster {

// Community assignment of n items. Ids are contiguous in [0, community_count)
// and every community is nonempty.
struct Partition {
    std::vector<int> assignment;
    int community_count = 0;
    double objective = 0.0;   // method-specific (k-means SSE, modularity Q, ...)
    bool degenerate = false;  // set when the input could not be split meaningfully

    int size() const { return static_cast<int>(assignment.size()); }
    std::vector<int> community_sizes() const;
};

// Relabels arbitrary non-negative ids to contiguous ids ordered by first
// appearance.
Partition canonical_partition(std::span<const int> ids);

// Relabels to contiguous ids preserving the relative order of the input ids.
Partition compact_partition(std::span<const int> ids);

bool is_valid(const Partition& p);

}  // namespace geocluster
