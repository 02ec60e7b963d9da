#pragma once

// Mode-specific validation: digital cheques, and digital cash with an
// unspent-output index and asynchronous acknowledgment by spending.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "tea/receipt.hpp"

namespace tea {

struct UtxoEntry {
    Outpoint outpoint;
    AgentId owner;
    Amount amount = 0;
    std::optional<Digest> spent_by; // set once, permanently

    bool spent() const noexcept { return spent_by.has_value(); }
};

/// Outputs created by a committed cash receipt, change last.
std::vector<CashOutput> receipt_outputs(const SignedReceipt& receipt);

/// Derived index of every output ever created; rebuilt from the log.
class UtxoSet {
public:
    const UtxoEntry* find(const Outpoint& outpoint) const;
    /// Applies a committed cash receipt: inputs spent, outputs created.
    void apply(const SignedReceipt& receipt);

    std::vector<UtxoEntry> unspent() const;
    std::vector<UtxoEntry> unspent_of(const AgentId& owner) const;
    Amount unspent_total() const noexcept;

    Amount minted_total() const noexcept { return minted_; }
    Amount fees_total() const noexcept { return fees_; }
    Amount recycled_total() const noexcept { return recycled_; }
    /// Fees collected but not yet recycled through a coinbase.
    Amount fee_pool() const noexcept { return fees_ - recycled_; }

private:
    std::map<Outpoint, UtxoEntry> entries_;
    Amount minted_ = 0;
    Amount fees_ = 0;
    Amount recycled_ = 0;
};

UtxoSet rebuild_utxo(const std::vector<SignedReceipt>& receipts);

struct CashCheck {
    Amount input_total = 0;
    Amount change = 0; // returned to the spender when positive
};

/// Conservation and ownership rules for a spend by `spender`.
/// Errors: DoubleSpend, UnknownOutpoint, NotOwner, InsufficientInput.
CashCheck check_cash(const CashTransaction& tx, const AgentId& spender, const UtxoSet& utxo);

/// The cash entry must be a single payment spender -> payee of exactly
/// the declared outputs, all owned by that payee.
void check_cash_shape(const Proposal& proposal);

/// Issuer (offer), receiver (accept) and notary signatures are all required.
/// Error: MissingReceiverSignature.
void check_cheque(const TransactionDraft& draft);

/// Single-event cash payment entry matching `tx`.
SharedEntry make_cash_entry(const AgentId& spender, const CashTransaction& tx, std::string resource_id,
                            std::string event_id, Timestamp occurred_at);

/// Coinbase proposal: amount + collected fees to the validator, no inputs.
Proposal make_coinbase_proposal(const AgentId& validator, Amount amount, Amount collected_fees,
                                std::string resource_id, std::string event_id, Timestamp occurred_at);

enum class AckStatus { pending, acknowledged };

/// Receiver's asynchronous second signature: spending an output of
/// `prior` acknowledges it. Errors: NotPayee, InvariantViolation when the
/// spend does not reference `prior`.
AckStatus acknowledge_by_spend(const Proposal& spending, const AgentId& spender, const SignedReceipt& prior);

/// Derived acknowledgment status per cash receipt. Never touches receipts.
class AcknowledgmentTable {
public:
    using Lookup = std::function<const SignedReceipt*(const Digest&)>;

    void observe(const SignedReceipt& receipt, const Lookup& lookup);
    AckStatus status(const Digest& receipt_id) const;
    std::size_t acknowledged_count() const noexcept;

private:
    std::map<Digest, AckStatus> status_;
};

AcknowledgmentTable rebuild_acknowledgments(const std::vector<SignedReceipt>& receipts);

} // namespace tea
