#pragma once

// Drafts and triple-signed receipts, and the exact byte payloads each
// signer covers.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tea/crypto.hpp"
#include "tea/rea.hpp"

namespace tea {

enum class Mode { joint_suite, digital_cheque, digital_cash };

std::string_view to_string(Mode mode) noexcept;
Mode parse_mode(std::string_view text);

struct Outpoint {
    Digest receipt_id;
    std::uint32_t index = 0;

    friend auto operator<=>(const Outpoint&, const Outpoint&) = default;
};

std::string to_string(const Outpoint& outpoint); // "<receipt hex>:<index>"
Outpoint parse_outpoint(std::string_view text);

struct CashOutput {
    AgentId owner;
    Amount amount = 0;

    friend bool operator==(const CashOutput&, const CashOutput&) = default;
};

struct CashTransaction {
    std::vector<Outpoint> inputs;
    std::vector<CashOutput> outputs; // declared outputs; change is appended by the validator
    Amount fee = 0;

    Amount output_total() const noexcept;
    friend bool operator==(const CashTransaction&, const CashTransaction&) = default;
};

/// Marks an input-less minting transaction.
struct CoinbaseInfo {
    Amount minted = 0;
    Amount recycled_fees = 0;

    friend bool operator==(const CoinbaseInfo&, const CoinbaseInfo&) = default;
};

/// Everything the initiating and accepting parties sign.
struct Proposal {
    std::string draft_id;
    Mode mode = Mode::joint_suite;
    SharedEntry entry; // signed portion only; stubs never travel here
    std::optional<CashTransaction> cash;
    std::optional<CoinbaseInfo> coinbase;

    friend bool operator==(const Proposal&, const Proposal&) = default;
};

enum class DraftState { drafted, offered, accepted, validated, rejected, expired };

std::string_view to_string(DraftState state) noexcept;
DraftState parse_draft_state(std::string_view text);

struct TransactionDraft {
    Proposal proposal;
    DraftState state = DraftState::drafted;
    std::optional<Signature> offer_sig;
    std::optional<Signature> accept_sig;
    Timestamp created_at = 0;
    Timestamp expires_at = 0;

    const std::string& draft_id() const noexcept { return proposal.draft_id; }
    const SharedEntry& entry() const noexcept { return proposal.entry; }
};

struct SignedReceipt {
    Digest receipt_id;
    std::uint64_t seq = 0;
    Digest prev_digest;
    Timestamp committed_at = 0;
    Proposal proposal;
    std::optional<Amount> change; // cash: output index = number of declared outputs
    Signature offer_sig;
    std::optional<Signature> accept_sig;
    std::vector<Signature> validator_sigs;

    const SharedEntry& entry() const noexcept { return proposal.entry; }
    Mode mode() const noexcept { return proposal.mode; }
    bool is_coinbase() const noexcept { return proposal.coinbase.has_value(); }

    friend bool operator==(const SignedReceipt&, const SignedReceipt&) = default;
};

/// Bytes covered by the offer and acceptance signatures.
std::string party_payload(const Proposal& proposal);
/// Bytes covered by validator signatures: the receipt body without
/// receipt_id and without the validator signatures themselves.
std::string validator_payload(const SignedReceipt& receipt);
Digest compute_receipt_id(const SignedReceipt& receipt);
/// Digest of the full canonical receipt; the next receipt's prev_digest.
Digest receipt_digest(const SignedReceipt& receipt);

void encode_fields(CanonicalWriter& w, const Outpoint& outpoint);
Outpoint decode_fields(CanonicalReader& r, std::type_identity<Outpoint>);
void encode_fields(CanonicalWriter& w, const CashTransaction& tx);
CashTransaction decode_fields(CanonicalReader& r, std::type_identity<CashTransaction>);
void encode_fields(CanonicalWriter& w, const CoinbaseInfo& info);
CoinbaseInfo decode_fields(CanonicalReader& r, std::type_identity<CoinbaseInfo>);
void encode_fields(CanonicalWriter& w, const Proposal& proposal);
Proposal decode_fields(CanonicalReader& r, std::type_identity<Proposal>);
void encode_fields(CanonicalWriter& w, const TransactionDraft& draft);
TransactionDraft decode_fields(CanonicalReader& r, std::type_identity<TransactionDraft>);
void encode_fields(CanonicalWriter& w, const SignedReceipt& receipt);
SignedReceipt decode_fields(CanonicalReader& r, std::type_identity<SignedReceipt>);

} // namespace tea
