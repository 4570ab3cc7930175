#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "rtsync/model/model.hpp"

namespace testsupport {

/// Independent isomorphism oracle: tries every node bijection and compares
/// edge multisets under it. Only usable on very small models.
inline bool bruteForceIsomorphic(const rtsync::Model& a, const rtsync::Model& b) {
    using rtsync::ElementId;
    if (a.nodes().size() != b.nodes().size() || a.edges().size() != b.edges().size()) return false;

    std::vector<ElementId> na, nb;
    for (const auto& [id, n] : a.nodes()) na.push_back(id);
    for (const auto& [id, n] : b.nodes()) nb.push_back(id);

    std::vector<std::size_t> perm(nb.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        std::map<ElementId, ElementId> map;
        for (std::size_t i = 0; i < na.size() && ok; ++i) {
            const rtsync::Node& x = a.nodes().at(na[i]);
            const rtsync::Node& y = b.nodes().at(nb[perm[i]]);
            if (x.type != y.type || x.attributes != y.attributes) ok = false;
            map[x.id] = y.id;
        }
        if (!ok) continue;
        std::multiset<std::tuple<std::string, ElementId, ElementId>> ea, eb;
        for (const auto& [id, e] : a.edges()) ea.insert({e.type, map.at(e.source), map.at(e.target)});
        for (const auto& [id, e] : b.edges()) eb.insert({e.type, e.source, e.target});
        if (ea == eb) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace testsupport
