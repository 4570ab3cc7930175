#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rtsync/model/meta_model.hpp"

namespace rtsync::tgg {

enum class Domain { Source, Corr, Target };
enum class Marking { Context, Created };
enum class PatternKind { Node, Edge };
enum class Dir { Forward, Backward };

const char* domainName(Domain d);
const char* markingName(Marking m);
const char* dirName(Dir d);

/// The side of the triple a direction matches against (its anchors live
/// there) versus the side it creates elements in.
inline Domain inputDomain(Dir d) { return d == Dir::Forward ? Domain::Source : Domain::Target; }
inline Domain outputDomain(Dir d) { return d == Dir::Forward ? Domain::Target : Domain::Source; }

/// One pattern variable. Corr-domain edges are link declarations: their
/// type is "link", src names a corr node var, dst a source or target var.
/// They declare membership in the corr node's linked id sets rather than
/// model edges of their own.
struct PatternElement {
    std::string var;
    PatternKind kind = PatternKind::Node;
    std::string type;
    Domain domain = Domain::Source;
    Marking marking = Marking::Context;
    std::string src, dst; // edges only
};

struct ExprConst {
    AttrValue value;
};
struct ExprCopy {
    std::string var, attr;
};
struct ExprAffine {
    std::string var, attr;
    double a = 1.0, b = 0.0;
};
/// copy(num)/max(copy(den),1), evaluated in real arithmetic.
struct ExprRatio {
    std::string numVar, numAttr, denVar, denAttr;
};
using AttrExpr = std::variant<ExprConst, ExprCopy, ExprAffine, ExprRatio>;

enum class ConstraintDirection { Bidirectional, ForwardOnly };

struct AttributeConstraint {
    std::string slotVar, slotAttr;
    AttrExpr expr;
    ConstraintDirection direction = ConstraintDirection::ForwardOnly;
};

/// Default attribute value used when the backward direction creates or
/// materializes the named source element.
struct BackwardDefault {
    std::string var, attr;
    AttrValue value;
};

struct TggRule {
    std::string name;
    int priority = 0;
    std::vector<PatternElement> elements;
    std::vector<AttributeConstraint> constraints;
    std::vector<BackwardDefault> backwardDefaults;

    bool axiom = false; // zero context elements
    std::map<std::string, std::size_t> varIndex;

    const PatternElement& element(const std::string& var) const;
    const PatternElement* find(const std::string& var) const;
    bool hasDefaultFor(const std::string& var, const std::string& attr) const;
    /// Context source node whose attributes are fully defaulted; the
    /// backward direction may create it when no candidate exists.
    bool materializable(const std::string& var) const;
};

enum class Directionality { Bidirectional, ForwardOnly };

/// A validated rule collection over one metamodel pair. Construction (via
/// loadRuleSet) checks all well-formedness invariants and compiles search
/// plans for the supported directions.
struct RuleSet {
    std::string name;
    Directionality direction = Directionality::ForwardOnly;
    std::vector<std::string> corrTypes;
    std::vector<TggRule> rules; // ordered by (priority, name)
    std::shared_ptr<const MetaModel> sourceMeta, targetMeta;

    const TggRule* findRule(const std::string& name) const;
    bool bidirectional() const { return direction == Directionality::Bidirectional; }
};

/// Validates rule and ruleset invariants; called by loadRuleSet and usable
/// on programmatically built rules. Throws ValidationError naming the rule
/// and the violated invariant.
void validateRuleSet(RuleSet& rules);

} // namespace rtsync::tgg
