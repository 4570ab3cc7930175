#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>

namespace rtsync {

using ElementId = std::uint64_t;

enum class ValueKind { String, Integer, Real, Boolean };

/// Attribute value. The alternative index matches ValueKind.
using AttrValue = std::variant<std::string, std::int64_t, double, bool>;

using AttributeMap = std::map<std::string, AttrValue>;

inline ValueKind kindOf(const AttrValue& v) {
    return static_cast<ValueKind>(v.index());
}

const char* kindName(ValueKind k);
ValueKind kindFromName(const std::string& name);

/// Compact single-line rendering, used in diagnostics and canonical forms.
std::string toString(const AttrValue& v);

} // namespace rtsync
