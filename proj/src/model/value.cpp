#include "rtsync/model/value.hpp"

#include <sstream>

#include "rtsync/errors.hpp"

namespace rtsync {

const char* kindName(ValueKind k) {
    switch (k) {
    case ValueKind::String: return "string";
    case ValueKind::Integer: return "integer";
    case ValueKind::Real: return "real";
    case ValueKind::Boolean: return "boolean";
    }
    return "?";
}

ValueKind kindFromName(const std::string& name) {
    if (name == "string") return ValueKind::String;
    if (name == "integer") return ValueKind::Integer;
    if (name == "real") return ValueKind::Real;
    if (name == "boolean") return ValueKind::Boolean;
    throw ParseError("unknown attribute kind '" + name + "'");
}

std::string toString(const AttrValue& v) {
    std::ostringstream os;
    switch (kindOf(v)) {
    case ValueKind::String: os << '"' << std::get<std::string>(v) << '"'; break;
    case ValueKind::Integer: os << std::get<std::int64_t>(v); break;
    case ValueKind::Real: os.precision(17); os << std::get<double>(v); break;
    case ValueKind::Boolean: os << (std::get<bool>(v) ? "true" : "false"); break;
    }
    return os.str();
}

} // namespace rtsync
