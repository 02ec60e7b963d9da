#include "tea/rea.hpp"

#include <algorithm>

namespace tea {

const AgentId& coinbase_agent()
{
    static const AgentId id(64, '0');
    return id;
}

std::string_view to_string(ResourceKind kind) noexcept
{
    switch (kind) {
    case ResourceKind::currency: return "currency";
    case ResourceKind::good: return "good";
    case ResourceKind::instrument: return "instrument";
    }
    return "currency";
}

ResourceKind parse_resource_kind(std::string_view text)
{
    if (text == "currency") return ResourceKind::currency;
    if (text == "good") return ResourceKind::good;
    if (text == "instrument") return ResourceKind::instrument;
    fail(Errc::decode_error, "unknown resource kind '" + std::string(text) + "'");
}

void validate_resource(const Resource& resource)
{
    if (!is_token(resource.resource_id)) fail(Errc::invariant_violation, "resource id is not an identifier");
    if (resource.kind == ResourceKind::instrument && !resource.contract_digest)
        fail(Errc::invariant_violation, "instrument '" + resource.resource_id + "' has no contract digest");
}

bool SharedEntry::mentions(const AgentId& agent) const noexcept
{
    return std::any_of(events.begin(), events.end(),
                       [&](const EconomicEvent& e) { return e.from_agent == agent || e.to_agent == agent; });
}

const AgentId& SharedEntry::counterparty_of(const AgentId& agent) const
{
    const auto& e = events.front();
    if (e.from_agent == agent) return e.to_agent;
    if (e.to_agent == agent) return e.from_agent;
    fail(Errc::not_a_party, "agent is not named in the entry");
}

void validate_event(const EconomicEvent& event)
{
    if (!is_token(event.event_id)) fail(Errc::invariant_violation, "event id is not an identifier");
    if (!is_token(event.resource_id)) fail(Errc::invariant_violation, "resource id is not an identifier");
    if (event.quantity <= 0) fail(Errc::invariant_violation, "event quantity must be positive");
    if (!is_lower_hex(event.from_agent) || event.from_agent.empty() || !is_lower_hex(event.to_agent) ||
        event.to_agent.empty())
        fail(Errc::invariant_violation, "agent ids must be lowercase hex key ids");
    if (event.from_agent == event.to_agent) fail(Errc::invariant_violation, "event moves a resource to its own source");
}

Digest compute_entry_id(const std::vector<EconomicEvent>& events)
{
    CanonicalWriter w;
    w.unsigned_integer("events", events.size());
    for (std::size_t i = 0; i < events.size(); ++i) w.nested("event." + std::to_string(i), events[i]);
    return Digest::of(w.str());
}

SharedEntry make_exchange(EconomicEvent give, EconomicEvent take)
{
    if (give.from_agent != take.to_agent || give.to_agent != take.from_agent)
        fail(Errc::agent_mismatch, "exchange legs must run in opposite directions between the same agents");
    validate_event(give);
    validate_event(take);
    if (give.event_id == take.event_id) fail(Errc::invariant_violation, "exchange legs share an event id");
    if ((give.duality_of && *give.duality_of != take.event_id) ||
        (take.duality_of && *take.duality_of != give.event_id))
        fail(Errc::invariant_violation, "exchange leg already linked elsewhere");
    give.duality_of = take.event_id;
    take.duality_of = give.event_id;

    SharedEntry entry;
    entry.events = {std::move(give), std::move(take)};
    std::sort(entry.events.begin(), entry.events.end(),
              [](const EconomicEvent& a, const EconomicEvent& b) { return a.event_id < b.event_id; });
    entry.entry_id = compute_entry_id(entry.events);
    return entry;
}

SharedEntry make_payment(EconomicEvent event)
{
    validate_event(event);
    if (event.duality_of) fail(Errc::invariant_violation, "a payment entry cannot carry a duality link");
    SharedEntry entry;
    entry.events = {std::move(event)};
    entry.entry_id = compute_entry_id(entry.events);
    return entry;
}

void validate_entry(const SharedEntry& entry)
{
    if (entry.events.empty() || entry.events.size() > 2)
        fail(Errc::invariant_violation, "an entry holds one event or a dual pair");
    for (const auto& e : entry.events) validate_event(e);
    if (entry.events.size() == 1) {
        if (entry.events[0].duality_of) fail(Errc::invariant_violation, "single-event entry with a duality link");
    } else {
        const auto& a = entry.events[0];
        const auto& b = entry.events[1];
        if (!(a.event_id < b.event_id)) fail(Errc::invariant_violation, "dual pair not in canonical order");
        if (a.duality_of != b.event_id || b.duality_of != a.event_id)
            fail(Errc::invariant_violation, "duality links are not mutual");
        if (a.from_agent != b.to_agent || a.to_agent != b.from_agent)
            fail(Errc::invariant_violation, "dual pair agents do not cross-match");
    }
    if (entry.entry_id != compute_entry_id(entry.events)) fail(Errc::invariant_violation, "entry id mismatch");
}

SharedEntry without_stubs(SharedEntry entry)
{
    entry.payer_stub.reset();
    entry.payee_stub.reset();
    return entry;
}

void encode_fields(CanonicalWriter& w, const EconomicEvent& event)
{
    w.token("event_id", event.event_id)
        .token("resource_id", event.resource_id)
        .integer("quantity", event.quantity)
        .hex("from_agent", event.from_agent)
        .hex("to_agent", event.to_agent)
        .timestamp("occurred_at", event.occurred_at);
    if (event.duality_of) w.token("duality_of", *event.duality_of);
}

EconomicEvent decode_fields(CanonicalReader& r, std::type_identity<EconomicEvent>)
{
    EconomicEvent e;
    e.event_id = r.token("event_id");
    e.resource_id = r.token("resource_id");
    e.quantity = r.integer("quantity");
    e.from_agent = r.hex("from_agent");
    e.to_agent = r.hex("to_agent");
    e.occurred_at = r.timestamp("occurred_at");
    if (r.has("duality_of")) e.duality_of = r.token("duality_of");
    return e;
}

void encode_fields(CanonicalWriter& w, const SharedEntry& entry)
{
    w.hex("entry_id", entry.entry_id.hex());
    w.unsigned_integer("events", entry.events.size());
    for (std::size_t i = 0; i < entry.events.size(); ++i) w.nested("event." + std::to_string(i), entry.events[i]);
    if (entry.payer_stub) w.text("payer_stub", *entry.payer_stub);
    if (entry.payee_stub) w.text("payee_stub", *entry.payee_stub);
}

SharedEntry decode_fields(CanonicalReader& r, std::type_identity<SharedEntry>)
{
    SharedEntry entry;
    entry.entry_id = Digest::from_hex(r.hex("entry_id"));
    const auto count = r.unsigned_integer("events");
    if (count == 0 || count > 2) fail(Errc::decode_error, "entry must hold one or two events");
    for (std::uint64_t i = 0; i < count; ++i)
        entry.events.push_back(r.nested<EconomicEvent>("event." + std::to_string(i)));
    if (r.has("payer_stub")) entry.payer_stub = r.text("payer_stub");
    if (r.has("payee_stub")) entry.payee_stub = r.text("payee_stub");
    return entry;
}

void encode_fields(CanonicalWriter& w, const Resource& resource)
{
    w.token("resource_id", resource.resource_id).token("kind", to_string(resource.kind));
    if (resource.contract_digest) w.hex("contract_digest", resource.contract_digest->hex());
    w.text("unit", resource.unit);
}

Resource decode_fields(CanonicalReader& r, std::type_identity<Resource>)
{
    Resource res;
    res.resource_id = r.token("resource_id");
    res.kind = parse_resource_kind(r.token("kind"));
    if (r.has("contract_digest")) res.contract_digest = Digest::from_hex(r.hex("contract_digest"));
    res.unit = r.text("unit");
    return res;
}

void ResourceCatalog::add(Resource resource)
{
    validate_resource(resource);
    resources_.insert_or_assign(resource.resource_id, std::move(resource));
}

const Resource* ResourceCatalog::find(std::string_view resource_id) const
{
    const auto it = resources_.find(resource_id);
    return it == resources_.end() ? nullptr : &it->second;
}

std::string ResourceCatalog::serialize() const
{
    std::string out;
    for (const auto& [id, res] : resources_) {
        if (!out.empty()) out.push_back('\n');
        out += canonical_encode(res);
    }
    return out;
}

ResourceCatalog ResourceCatalog::parse(std::string_view text)
{
    ResourceCatalog catalog;
    for (auto block : split_blocks(text)) catalog.add(canonical_decode<Resource>(block));
    return catalog;
}

std::vector<std::string_view> split_blocks(std::string_view text)
{
    std::vector<std::string_view> blocks;
    std::size_t start = 0;
    while (start < text.size()) {
        auto sep = text.find("\n\n", start);
        if (sep == std::string_view::npos) {
            blocks.push_back(text.substr(start));
            break;
        }
        blocks.push_back(text.substr(start, sep + 1 - start));
        start = sep + 2;
    }
    return blocks;
}

} // namespace tea
