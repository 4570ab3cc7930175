#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>

#include "rtsync/model/change.hpp"
#include "rtsync/model/meta_model.hpp"

namespace rtsync {

struct Node {
    ElementId id = 0;
    std::string type;
    AttributeMap attributes;
};

struct Edge {
    ElementId id = 0;
    std::string type;
    ElementId source = 0;
    ElementId target = 0;
};

/// Typed attributed graph instance with an append-only change journal.
///
/// Element ids are model-scoped, monotonically assigned and never reused;
/// nodes and edges share one id space. All mutations go through a Writer,
/// which holds the model's writer lock for its whole lifetime: every record
/// appended through one Writer forms one contiguous journal segment that no
/// concurrent snapshot can split. snapshotJournal takes the shared side of
/// the same lock and is safe from any thread.
class Model {
public:
    Model(std::string id, std::shared_ptr<const MetaModel> metaModel);
    /// Moving locks the source; the new model starts with a fresh lock.
    Model(Model&& other);
    Model& operator=(Model&&) = delete;

    const std::string& id() const { return id_; }
    const MetaModel& metaModel() const { return *metaModel_; }
    std::shared_ptr<const MetaModel> metaModelPtr() const { return metaModel_; }

    const std::map<ElementId, Node>& nodes() const { return nodes_; }
    const std::map<ElementId, Edge>& edges() const { return edges_; }
    const Node* findNode(ElementId id) const;
    const Edge* findEdge(ElementId id) const;
    std::size_t elementCount() const { return nodes_.size() + edges_.size(); }

    /// Node ids of exactly this concrete type (no subtype closure).
    const std::set<ElementId>& nodesOfType(const std::string& type) const;
    /// Edge ids of this edge type.
    const std::set<ElementId>& edgesOfType(const std::string& type) const;
    /// Outgoing/incoming edge ids of one edge type at a node.
    const std::set<ElementId>& outEdges(ElementId node, const std::string& type) const;
    const std::set<ElementId>& inEdges(ElementId node, const std::string& type) const;
    /// All incident edge ids (any type, both directions), ascending.
    std::set<ElementId> incidentEdges(ElementId node) const;
    /// Id of the containment edge pointing at `node`, 0 if none.
    ElementId containmentEdgeTo(ElementId node) const;

    std::uint64_t nextSeq() const;
    std::uint64_t journalSize() const;

    /// All records with seq > cursor, as an immutable batch. Throws
    /// ValidationError when the cursor lies beyond the journal.
    ChangeBatch snapshotJournal(std::uint64_t cursor) const;

    /// Exclusive mutation handle. Validates every request against the
    /// metamodel, journals it (cascade deletions as individual records,
    /// subtree first) and keeps the model conforming.
    class Writer {
    public:
        explicit Writer(Model& m);
        Writer(Writer&&) = default;

        /// Returns the record for the requested mutation; for delete-node
        /// this is the final node-deleted record, after all cascade records.
        ChangeRecord apply(const ChangeRequest& request);

        Model& model() { return model_; }

        /// Journal seq when the writer was acquired / right now. Everything
        /// in (baseSeq, lastSeq] was written through this writer.
        std::uint64_t baseSeq() const { return baseSeq_; }
        std::uint64_t lastSeq() const { return model_.lastSeq_; }

    private:
        Model& model_;
        std::unique_lock<std::shared_mutex> lock_;
        std::uint64_t baseSeq_ = 0;
    };

    Writer write() { return Writer(*this); }
    /// One-shot convenience: a Writer for a single request.
    ChangeRecord applyChange(const ChangeRequest& request);

    /// Shared lock for multi-read consistency (e.g. matching over the live
    /// model). Do not combine with snapshotJournal or a Writer on the same
    /// thread while held.
    std::shared_lock<std::shared_mutex> readLock() const {
        return std::shared_lock<std::shared_mutex>(mutex_);
    }

    // Unchecked construction, for loading files, replay and test fixtures.
    // No journaling, no conformance checks; indexes are maintained and the
    // id watermark advances past the inserted id.
    void insertNodeRaw(Node node);
    void insertEdgeRaw(Edge edge);
    void removeNodeRaw(ElementId id);
    void removeEdgeRaw(ElementId id);
    /// Re-applies a journaled record verbatim (same ids, same seq).
    void applyRecordRaw(const ChangeRecord& record);

private:
    ChangeRecord applyLocked(const ChangeRequest& request);
    ChangeRecord doCreateNode(const CreateNode& req);
    ChangeRecord doDeleteNode(ElementId id);
    ChangeRecord doCreateEdge(const CreateEdge& req);
    ChangeRecord doDeleteEdge(ElementId id);
    ChangeRecord doSetAttribute(const SetAttribute& req);
    void indexEdge(const Edge& e);
    void unindexEdge(const Edge& e);
    ElementId takeId();

    std::string id_;
    std::shared_ptr<const MetaModel> metaModel_;
    std::map<ElementId, Node> nodes_;
    std::map<ElementId, Edge> edges_;
    ElementId nextId_ = 1;

    std::map<std::string, std::set<ElementId>> nodesByType_;
    std::map<std::string, std::set<ElementId>> edgesByType_;
    std::map<ElementId, std::map<std::string, std::set<ElementId>>> out_;
    std::map<ElementId, std::map<std::string, std::set<ElementId>>> in_;

    std::vector<ChangeRecord> journal_;
    std::uint64_t lastSeq_ = 0;

    mutable std::shared_mutex mutex_;
};

} // namespace rtsync
