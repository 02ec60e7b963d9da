#pragma once

// Shared Transaction Repository: offer -> acceptance -> validation,
// committing triple-signed receipts to a hash-chained append-only log.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tea/payment.hpp"
#include "tea/receipt.hpp"

namespace tea {

class Clock {
public:
    virtual ~Clock() = default;
    virtual Timestamp now() const = 0;
};

/// Simulated clock; moves only when told to.
class ManualClock final : public Clock {
public:
    explicit ManualClock(Timestamp start = 0) : now_(start) {}
    Timestamp now() const override { return now_; }
    void set(Timestamp t) { now_ = t; }
    void advance(Timestamp seconds) { now_ += seconds; }

private:
    Timestamp now_;
};

class SystemClock final : public Clock {
public:
    Timestamp now() const override;
};

/// Third signer. A notary endorses every payload; tests use offline
/// validators to starve a quorum.
class Validator {
public:
    virtual ~Validator() = default;
    virtual const KeyId& key_id() const = 0;
    virtual std::optional<Signature> endorse(std::string_view payload) = 0;
};

class NotaryValidator final : public Validator {
public:
    explicit NotaryValidator(KeyPair key) : key_(std::move(key)) {}

    const KeyId& key_id() const override { return key_.key_id; }
    std::optional<Signature> endorse(std::string_view payload) override;

    void set_online(bool online) noexcept { online_ = online; }
    const KeyPair& key() const noexcept { return key_; }

private:
    KeyPair key_;
    bool online_ = true;
};

struct StrConfig {
    Mode mode = Mode::joint_suite;
    /// false: neutral storage. Validation still runs, nothing is countersigned.
    bool server_signs = true;
    std::size_t quorum = 1;
    Timestamp draft_ttl = 24 * 60 * 60;
    std::string cash_resource = "COIN";
};

/// Append-only sequence of receipts. Appends enforce seq and chaining.
class ReceiptLog {
public:
    void append(SignedReceipt receipt);

    const std::vector<SignedReceipt>& receipts() const noexcept { return receipts_; }
    std::size_t size() const noexcept { return receipts_.size(); }
    bool empty() const noexcept { return receipts_.empty(); }
    /// Digest of the last receipt; all-zero for an empty log.
    Digest head_digest() const;

    /// Canonical blocks separated by a blank line.
    std::string serialize() const;
    /// Decodes without verifying; run verify_chain on the result.
    static ReceiptLog parse(std::string_view text);
    /// Wraps receipts without any checks (diagnostics and tamper tests).
    static ReceiptLog from_unchecked(std::vector<SignedReceipt> receipts);

private:
    std::vector<SignedReceipt> receipts_;
};

struct ChainPolicy {
    /// Accepted validator key ids; empty accepts any validly signing key.
    std::vector<KeyId> trusted_validators;
    std::size_t min_validator_sigs = 0;
};

struct ChainReport {
    bool ok = true;
    std::optional<std::uint64_t> first_bad_seq;
    std::string reason;
};

/// Checks a receipt on its own (id, shape, signatures), ignoring its chain
/// position. Returns the first defect found.
std::optional<std::string> receipt_defect(const SignedReceipt& receipt, const ChainPolicy& policy = {});

/// Per-receipt checks: id, chaining, entry shape and every signature.
ChainReport verify_chain(const ReceiptLog& log, const ChainPolicy& policy = {});
/// Same over raw log text; a block that does not decode, or does not
/// re-encode to the identical bytes, is reported at its position.
ChainReport verify_chain_text(std::string_view text, const ChainPolicy& policy = {});

/// Receipts naming `party`, in log order. Throws ChainBroken.
std::vector<SignedReceipt> recover_and_reforward(const ReceiptLog& log, const AgentId& party,
                                                 const ChainPolicy& policy = {});

class SharedTransactionRepository {
public:
    using Forwarder = std::function<void(const AgentId& recipient, const SignedReceipt& receipt)>;

    SharedTransactionRepository(StrConfig config, std::vector<std::shared_ptr<Validator>> validators,
                                std::shared_ptr<const Clock> clock, ReceiptLog log = {});

    TransactionDraft open_draft(SharedEntry entry, std::optional<CashTransaction> cash = std::nullopt) const;
    /// Errors: NotAParty, InvariantViolation, WrongState.
    TransactionDraft offer(TransactionDraft draft, const KeyPair& initiator) const;
    TransactionDraft offer(SharedEntry entry, const KeyPair& initiator,
                           std::optional<CashTransaction> cash = std::nullopt) const;
    /// Errors: WrongState, Expired, NotAParty, SignatureInvalid.
    TransactionDraft accept(TransactionDraft draft, const KeyPair& counterparty) const;
    TransactionDraft reject(TransactionDraft draft) const;

    /// Commits exactly one receipt or nothing. Errors: SignatureInvalid,
    /// DoubleSpend, QuorumNotMet, Conflict, WrongState, Expired,
    /// MissingReceiverSignature, cash errors.
    SignedReceipt validate(const TransactionDraft& draft);
    /// Errors: NotValidator, InsufficientInput (fees beyond the pool).
    SignedReceipt mint_coinbase(const KeyPair& validator, Amount amount, Amount collected_fees = 0);

    void set_forwarder(Forwarder forwarder);

    const StrConfig& config() const noexcept { return config_; }
    ChainPolicy chain_policy() const;
    ReceiptLog log_snapshot() const;
    std::size_t size() const;
    Digest head_digest() const;
    UtxoSet utxo_snapshot() const;
    AckStatus ack_status(const Digest& receipt_id) const;
    bool is_validator(const KeyId& key_id) const;

private:
    SignedReceipt commit_locked(const Proposal& proposal, const Signature& offer_sig,
                                const std::optional<Signature>& accept_sig);
    const SignedReceipt* find_locked(const Digest& receipt_id) const;
    void forward(const SignedReceipt& receipt) const;
    void rebuild_indexes();

    StrConfig config_;
    std::vector<std::shared_ptr<Validator>> validators_;
    std::shared_ptr<const Clock> clock_;
    Forwarder forwarder_;

    mutable std::shared_mutex mutex_;
    ReceiptLog log_;
    UtxoSet utxo_;
    AcknowledgmentTable acks_;
    std::set<std::string> committed_drafts_;
    std::set<Digest> committed_entries_;
    std::map<Digest, std::size_t> index_;
};

} // namespace tea
