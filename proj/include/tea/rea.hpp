#pragma once

// Resource-Event-Agent payload of a shared entry.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tea/canonical.hpp"
#include "tea/crypto.hpp"

namespace tea {

using AgentId = KeyId;

/// Reserved source agent of coinbase (minting) events.
const AgentId& coinbase_agent();

enum class ResourceKind { currency, good, instrument };

std::string_view to_string(ResourceKind kind) noexcept;
ResourceKind parse_resource_kind(std::string_view text);

struct Agent {
    AgentId agent_id;
    std::string display_name;
};

struct Resource {
    std::string resource_id;
    ResourceKind kind = ResourceKind::currency;
    std::optional<Digest> contract_digest; // required for instruments
    std::string unit;

    friend bool operator==(const Resource&, const Resource&) = default;
};

void validate_resource(const Resource& resource);

struct EconomicEvent {
    std::string event_id;
    std::string resource_id;
    Amount quantity = 0; // always > 0; direction lives in from/to
    AgentId from_agent;
    AgentId to_agent;
    Timestamp occurred_at = 0;
    std::optional<std::string> duality_of;

    friend bool operator==(const EconomicEvent&, const EconomicEvent&) = default;
};

/// One event (payment modes) or a mutually linked dual pair (joint
/// suite). Each side may keep a private stub; stubs are never hashed or
/// signed.
struct SharedEntry {
    Digest entry_id;
    std::vector<EconomicEvent> events;
    std::optional<std::string> payer_stub;
    std::optional<std::string> payee_stub;

    bool is_exchange() const noexcept { return events.size() == 2; }
    /// from/to agent of the first event in canonical order.
    const AgentId& payer() const { return events.front().from_agent; }
    const AgentId& payee() const { return events.front().to_agent; }
    bool mentions(const AgentId& agent) const noexcept;
    /// The other agent of a two-party entry.
    const AgentId& counterparty_of(const AgentId& agent) const;

    friend bool operator==(const SharedEntry&, const SharedEntry&) = default;
};

void validate_event(const EconomicEvent& event);

/// Bilateral exchange: `give` and `take` must run in opposite directions
/// between the same two agents. Duality links are set both ways.
SharedEntry make_exchange(EconomicEvent give, EconomicEvent take);
/// One-sided payment entry; the consideration is not recorded.
SharedEntry make_payment(EconomicEvent event);

/// Shape, duality and entry_id consistency. Throws InvariantViolation.
void validate_entry(const SharedEntry& entry);

/// Digest over the canonical encoding of the events alone.
Digest compute_entry_id(const std::vector<EconomicEvent>& events);

SharedEntry without_stubs(SharedEntry entry);

void encode_fields(CanonicalWriter& w, const EconomicEvent& event);
EconomicEvent decode_fields(CanonicalReader& r, std::type_identity<EconomicEvent>);
void encode_fields(CanonicalWriter& w, const SharedEntry& entry);
SharedEntry decode_fields(CanonicalReader& r, std::type_identity<SharedEntry>);
void encode_fields(CanonicalWriter& w, const Resource& resource);
Resource decode_fields(CanonicalReader& r, std::type_identity<Resource>);

/// Registry of resource definitions. Persisted as canonical blocks
/// separated by blank lines.
class ResourceCatalog {
public:
    void add(Resource resource);
    const Resource* find(std::string_view resource_id) const;
    const std::map<std::string, Resource, std::less<>>& resources() const noexcept { return resources_; }

    std::string serialize() const;
    static ResourceCatalog parse(std::string_view text);

private:
    std::map<std::string, Resource, std::less<>> resources_;
};

/// Splits text into blocks separated by one blank line.
std::vector<std::string_view> split_blocks(std::string_view text);

} // namespace tea
