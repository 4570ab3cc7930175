#include "rtsync/model/digest.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

namespace rtsync {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnvByte(std::uint64_t h, unsigned char b) {
    return (h ^ b) * kFnvPrime;
}

std::uint64_t fnvString(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) h = fnvByte(h, c);
    return fnvByte(h, 0xff); // terminator so "ab"+"c" != "a"+"bc"
}

std::uint64_t fnvWord(std::uint64_t h, std::uint64_t w) {
    for (int i = 0; i < 8; ++i) h = fnvByte(h, static_cast<unsigned char>(w >> (i * 8)));
    return h;
}

std::string attrRepr(const AttributeMap& attrs) {
    std::ostringstream os;
    for (const auto& [name, value] : attrs) os << name << '=' << toString(value) << ';';
    return os.str();
}

} // namespace

std::uint64_t contentDigest(const Model& model) {
    std::map<ElementId, std::uint64_t> sig;
    for (const auto& [id, node] : model.nodes()) {
        std::uint64_t h = fnvString(kFnvOffset, "node");
        h = fnvString(h, node.type);
        sig[id] = fnvString(h, attrRepr(node.attributes));
    }

    for (int round = 0; round < 3; ++round) {
        std::map<ElementId, std::vector<std::uint64_t>> neigh;
        for (const auto& [eid, edge] : model.edges()) {
            std::uint64_t base = fnvString(kFnvOffset, edge.type);
            neigh[edge.source].push_back(fnvWord(fnvString(base, "out"), sig.at(edge.target)));
            neigh[edge.target].push_back(fnvWord(fnvString(base, "in"), sig.at(edge.source)));
        }
        std::map<ElementId, std::uint64_t> next;
        for (const auto& [id, node] : model.nodes()) {
            std::uint64_t h = fnvWord(kFnvOffset, sig.at(id));
            auto it = neigh.find(id);
            if (it != neigh.end()) {
                std::sort(it->second.begin(), it->second.end());
                for (std::uint64_t n : it->second) h = fnvWord(h, n);
            }
            next[id] = h;
        }
        sig = std::move(next);
    }

    std::vector<std::uint64_t> parts;
    parts.reserve(model.nodes().size() + model.edges().size());
    for (const auto& [id, node] : model.nodes()) parts.push_back(sig.at(id));
    for (const auto& [eid, edge] : model.edges()) {
        std::uint64_t h = fnvString(kFnvOffset, "edge");
        h = fnvString(h, edge.type);
        h = fnvWord(h, sig.at(edge.source));
        parts.push_back(fnvWord(h, sig.at(edge.target)));
    }
    std::sort(parts.begin(), parts.end());

    std::uint64_t digest = fnvString(kFnvOffset, model.metaModel().name());
    for (std::uint64_t p : parts) digest = fnvWord(digest, p);
    return digest;
}

std::string contentDigestHex(const Model& model) {
    std::ostringstream os;
    os << std::hex << std::nouppercase;
    os.width(16);
    os.fill('0');
    os << contentDigest(model);
    return os.str();
}

} // namespace rtsync
