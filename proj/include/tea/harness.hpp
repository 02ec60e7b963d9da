#pragma once

// Deterministic in-process simulation of parties and an STR exchanging
// messages under delivery faults and crashes.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tea/str.hpp"
#include "tea/views.hpp"

namespace tea {

/// A party's local copy of the shared record: receipt bytes exactly as
/// delivered, deduplicated by receipt_id, plus private stubs.
class PartyStore {
public:
    explicit PartyStore(AgentId owner) : owner_(std::move(owner)) {}

    /// Verifies and stores a delivered receipt. Returns false for a duplicate.
    /// Errors: SignatureInvalid (fails standalone checks), NotAParty.
    bool receive(std::string_view receipt_bytes);
    void annotate(const Digest& receipt_id, std::string stub);
    void clear() { receipts_.clear(); }

    const AgentId& owner() const noexcept { return owner_; }
    const std::map<Digest, std::string>& receipts() const noexcept { return receipts_; }
    const StubBook& stubs() const noexcept { return stubs_; }
    /// Digest over stored receipts in receipt_id order; stubs excluded.
    Digest digest() const;

private:
    AgentId owner_;
    std::map<Digest, std::string> receipts_;
    StubBook stubs_;
};

struct ScenarioStep {
    std::string verb;
    std::map<std::string, std::string> args;

    std::string text() const; // "verb key=value ..."
    static ScenarioStep parse(std::string_view text);
};

struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    Mode mode = Mode::joint_suite;
    bool server_signs = true;
    std::size_t quorum = 1;
    Timestamp start = 0;
    std::vector<std::string> parties;
    std::vector<std::string> validators;
    std::vector<ScenarioStep> script;
    std::vector<std::string> assertions;
};

void encode_fields(CanonicalWriter& w, const Scenario& scenario);
Scenario decode_fields(CanonicalReader& r, std::type_identity<Scenario>);

struct StepError {
    std::size_t step = 0;
    std::string verb;
    Errc code{};
    bool expected = false;

    friend bool operator==(const StepError&, const StepError&) = default;
};

struct PropertyOutcome {
    std::string name;
    bool passed = false;
    std::string detail;

    friend bool operator==(const PropertyOutcome&, const PropertyOutcome&) = default;
};

struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::size_t receipts_committed = 0;
    std::string head_digest;
    std::string log_text;
    std::vector<StepError> errors;
    std::map<std::string, std::string> store_digests; // party name -> digest hex
    std::vector<PropertyOutcome> properties;

    bool all_passed() const;
    friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Runs a scenario to completion. Error: ScriptInvalid.
///
/// Verbs: open, offer, accept, validate, reject, spend, mint, stub,
/// crash_str, drop_next, duplicate_next, advance_clock, tamper_check.
/// Any step may carry expect=<ErrorName>.
/// Assertions: wysiwis, chain_valid, conservation, expectations,
/// tamper_detected, receipts:<n>, balance:<party>:<resource>:<n>,
/// acknowledged:<label>, dominance.
RunReport run(const Scenario& scenario);

/// The scenario with `fault` inserted before script position `at`.
Scenario with_fault(Scenario scenario, std::size_t at, const std::string& fault);

std::vector<Scenario> builtin_scenarios();
std::optional<Scenario> find_builtin(std::string_view name);

std::string format_report_text(const RunReport& report);
std::string format_report_json(const RunReport& report);

} // namespace tea
