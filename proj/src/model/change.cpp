#include "rtsync/model/change.hpp"

namespace rtsync {

const char* changeKindName(ChangeKind k) {
    switch (k) {
    case ChangeKind::NodeCreated: return "node-created";
    case ChangeKind::NodeDeleted: return "node-deleted";
    case ChangeKind::EdgeCreated: return "edge-created";
    case ChangeKind::EdgeDeleted: return "edge-deleted";
    case ChangeKind::AttributeSet: return "attribute-set";
    }
    return "?";
}

} // namespace rtsync
