#include "tea/str.hpp"

#include <algorithm>
#include <chrono>

namespace tea {

namespace {

/// Role rules for who may sign what, per mode.
std::optional<std::string> check_signers(const Proposal& p, const Signature& offer,
                                         const std::optional<Signature>& accept)
{
    const auto& event = p.entry.events.front();
    if (p.coinbase) {
        if (p.mode != Mode::digital_cash) return "coinbase outside digital cash";
        if (event.from_agent != coinbase_agent()) return "coinbase event must originate from the coinbase agent";
        if (offer.signer != event.to_agent) return "coinbase must be signed by the receiving validator";
        if (accept) return "coinbase carries no acceptance";
        return std::nullopt;
    }
    if (event.from_agent == coinbase_agent() || event.to_agent == coinbase_agent())
        return "coinbase agent used outside a coinbase";
    switch (p.mode) {
    case Mode::joint_suite:
        if (!p.entry.mentions(offer.signer)) return "offer not signed by a party";
        if (!accept) return "missing acceptance";
        if (accept->signer != p.entry.counterparty_of(offer.signer)) return "acceptance not signed by the counterparty";
        return std::nullopt;
    case Mode::digital_cheque:
        if (offer.signer != event.from_agent) return "cheque not signed by its issuer";
        if (!accept) return "missing receiver signature";
        if (accept->signer != event.to_agent) return "cheque not signed by its receiver";
        return std::nullopt;
    case Mode::digital_cash:
        if (offer.signer != event.from_agent) return "spend not signed by the spender";
        if (accept) return "cash receipts are acknowledged by spending, not countersigned";
        return std::nullopt;
    }
    return "unknown mode";
}

std::optional<std::string> check_shape(const Proposal& p)
{
    try {
        validate_entry(p.entry);
    } catch (const Error& e) {
        return std::string(e.what());
    }
    if (p.mode == Mode::joint_suite && !p.entry.is_exchange()) return "joint suite entries carry a dual pair";
    if (p.mode != Mode::joint_suite && p.entry.is_exchange()) return "payment entries carry a single event";
    if (p.mode == Mode::digital_cash) {
        try {
            check_cash_shape(p);
        } catch (const Error& e) {
            return std::string(e.what());
        }
    } else if (p.cash || p.coinbase) {
        return "cash section outside digital cash";
    }
    return std::nullopt;
}

} // namespace

std::optional<std::string> receipt_defect(const SignedReceipt& r, const ChainPolicy& policy)
{
    if (r.receipt_id != compute_receipt_id(r)) return "receipt_id does not match content";
    if (auto bad = check_shape(r.proposal)) return bad;
    if (auto bad = check_signers(r.proposal, r.offer_sig, r.accept_sig)) return bad;
    const auto payload = party_payload(r.proposal);
    if (!verify_signature(r.offer_sig, payload)) return "offer signature does not verify";
    if (r.accept_sig && !verify_signature(*r.accept_sig, payload)) return "acceptance signature does not verify";
    if (r.change && (r.mode() != Mode::digital_cash || *r.change <= 0)) return "unexpected change field";

    const auto vpayload = validator_payload(r);
    std::set<KeyId> signers;
    for (const auto& v : r.validator_sigs) {
        if (!signers.insert(v.signer).second) return "duplicate validator signature";
        if (!policy.trusted_validators.empty() &&
            std::find(policy.trusted_validators.begin(), policy.trusted_validators.end(), v.signer) ==
                policy.trusted_validators.end())
            return "validator not trusted";
        if (!verify_signature(v, vpayload)) return "validator signature does not verify";
    }
    if (r.validator_sigs.size() < policy.min_validator_sigs) return "too few validator signatures";
    return std::nullopt;
}

namespace {

std::optional<std::string> check_receipt(const SignedReceipt& r, std::uint64_t expected_seq, const Digest& expected_prev,
                                         const ChainPolicy& policy)
{
    if (r.seq != expected_seq) return "sequence gap";
    if (r.prev_digest != expected_prev) return "prev_digest does not match the previous receipt";
    return receipt_defect(r, policy);
}

} // namespace

Timestamp SystemClock::now() const
{
    using namespace std::chrono;
    return duration_cast<seconds>(system_clock::now().time_since_epoch()).count();
}

std::optional<Signature> NotaryValidator::endorse(std::string_view payload)
{
    if (!online_) return std::nullopt;
    return sign(key_, payload);
}

// --- ReceiptLog ------------------------------------------------------------

void ReceiptLog::append(SignedReceipt receipt)
{
    if (receipt.seq != receipts_.size()) fail(Errc::invariant_violation, "append out of sequence");
    if (receipt.prev_digest != head_digest()) fail(Errc::invariant_violation, "append does not chain to head");
    receipts_.push_back(std::move(receipt));
}

Digest ReceiptLog::head_digest() const
{
    return receipts_.empty() ? Digest::zero() : receipt_digest(receipts_.back());
}

std::string ReceiptLog::serialize() const
{
    std::string out;
    for (const auto& r : receipts_) {
        if (!out.empty()) out.push_back('\n');
        out += canonical_encode(r);
    }
    return out;
}

ReceiptLog ReceiptLog::parse(std::string_view text)
{
    ReceiptLog log;
    for (auto block : split_blocks(text)) log.receipts_.push_back(canonical_decode<SignedReceipt>(block));
    return log;
}

ReceiptLog ReceiptLog::from_unchecked(std::vector<SignedReceipt> receipts)
{
    ReceiptLog log;
    log.receipts_ = std::move(receipts);
    return log;
}

// --- verification ----------------------------------------------------------

ChainReport verify_chain(const ReceiptLog& log, const ChainPolicy& policy)
{
    Digest prev = Digest::zero();
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& r = log.receipts()[i];
        if (auto bad = check_receipt(r, i, prev, policy)) return {false, i, *bad};
        prev = receipt_digest(r);
    }
    return {};
}

ChainReport verify_chain_text(std::string_view text, const ChainPolicy& policy)
{
    const auto blocks = split_blocks(text);
    Digest prev = Digest::zero();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        SignedReceipt r;
        try {
            r = canonical_decode<SignedReceipt>(blocks[i]);
        } catch (const Error& e) {
            return {false, i, e.what()};
        }
        if (canonical_encode(r) != blocks[i]) return {false, i, "block is not in canonical form"};
        if (auto bad = check_receipt(r, i, prev, policy)) return {false, i, *bad};
        prev = Digest::of(blocks[i]);
    }
    return {};
}

std::vector<SignedReceipt> recover_and_reforward(const ReceiptLog& log, const AgentId& party, const ChainPolicy& policy)
{
    const auto report = verify_chain(log, policy);
    if (!report.ok) fail(Errc::chain_broken, "seq " + std::to_string(*report.first_bad_seq) + ": " + report.reason);
    std::vector<SignedReceipt> out;
    for (const auto& r : log.receipts())
        if (r.entry().mentions(party)) out.push_back(r);
    return out;
}

// --- repository ------------------------------------------------------------

SharedTransactionRepository::SharedTransactionRepository(StrConfig config,
                                                         std::vector<std::shared_ptr<Validator>> validators,
                                                         std::shared_ptr<const Clock> clock, ReceiptLog log)
    : config_(std::move(config)), validators_(std::move(validators)), clock_(std::move(clock)), log_(std::move(log))
{
    if (!clock_) fail(Errc::invariant_violation, "repository needs a clock");
    if (config_.server_signs && validators_.size() < config_.quorum)
        fail(Errc::quorum_not_met, "fewer validators than the quorum");
    const auto report = verify_chain(log_);
    if (!report.ok)
        fail(Errc::chain_broken, "seq " + std::to_string(*report.first_bad_seq) + ": " + report.reason);
    rebuild_indexes();
}

void SharedTransactionRepository::rebuild_indexes()
{
    utxo_ = UtxoSet{};
    acks_ = AcknowledgmentTable{};
    committed_drafts_.clear();
    committed_entries_.clear();
    index_.clear();
    for (std::size_t i = 0; i < log_.size(); ++i) {
        const auto& r = log_.receipts()[i];
        utxo_.apply(r);
        acks_.observe(r, [this](const Digest& id) { return find_locked(id); });
        committed_drafts_.insert(r.proposal.draft_id);
        committed_entries_.insert(r.entry().entry_id);
        index_.emplace(r.receipt_id, i);
    }
}

const SignedReceipt* SharedTransactionRepository::find_locked(const Digest& receipt_id) const
{
    const auto it = index_.find(receipt_id);
    return it == index_.end() ? nullptr : &log_.receipts()[it->second];
}

TransactionDraft SharedTransactionRepository::open_draft(SharedEntry entry, std::optional<CashTransaction> cash) const
{
    TransactionDraft draft;
    draft.proposal.mode = config_.mode;
    draft.proposal.entry = without_stubs(std::move(entry));
    draft.proposal.cash = std::move(cash);
    if (auto bad = check_shape(draft.proposal)) fail(Errc::invariant_violation, *bad);
    if (config_.mode == Mode::digital_cash && draft.entry().events.front().resource_id != config_.cash_resource)
        fail(Errc::invariant_violation, "cash entries must move " + config_.cash_resource);

    draft.created_at = clock_->now();
    draft.expires_at = draft.created_at + config_.draft_ttl;
    CanonicalWriter seed;
    seed.token("mode", to_string(config_.mode))
        .hex("entry_id", draft.entry().entry_id.hex())
        .timestamp("created_at", draft.created_at);
    if (draft.proposal.cash) seed.nested("cash", *draft.proposal.cash);
    draft.proposal.draft_id = Digest::of(seed.str()).hex();
    draft.state = DraftState::drafted;
    return draft;
}

TransactionDraft SharedTransactionRepository::offer(TransactionDraft draft, const KeyPair& initiator) const
{
    if (draft.state != DraftState::drafted) fail(Errc::wrong_state, "only drafted entries can be offered");
    if (auto bad = check_shape(draft.proposal)) fail(Errc::invariant_violation, *bad);
    if (clock_->now() > draft.expires_at) fail(Errc::expired, "draft expired before it was offered");
    const auto& event = draft.entry().events.front();
    const bool party = draft.proposal.mode == Mode::joint_suite ? draft.entry().mentions(initiator.key_id)
                                                                 : event.from_agent == initiator.key_id;
    if (!party) fail(Errc::not_a_party, "initiator is not the offering party of this entry");
    draft.offer_sig = sign(initiator, party_payload(draft.proposal));
    draft.state = DraftState::offered;
    return draft;
}

TransactionDraft SharedTransactionRepository::offer(SharedEntry entry, const KeyPair& initiator,
                                                    std::optional<CashTransaction> cash) const
{
    const bool is_party = entry.mentions(initiator.key_id);
    if (!is_party) fail(Errc::not_a_party, "initiator is not named in the entry");
    return offer(open_draft(std::move(entry), std::move(cash)), initiator);
}

TransactionDraft SharedTransactionRepository::accept(TransactionDraft draft, const KeyPair& counterparty) const
{
    {
        std::shared_lock lock(mutex_);
        if (committed_drafts_.contains(draft.draft_id())) fail(Errc::wrong_state, "draft already validated");
    }
    if (draft.state != DraftState::offered || !draft.offer_sig)
        fail(Errc::wrong_state, "only offered drafts can be accepted (state " + std::string(to_string(draft.state)) + ")");
    if (draft.proposal.mode == Mode::digital_cash)
        fail(Errc::wrong_state, "digital cash is acknowledged by spending, not countersigned");
    if (clock_->now() > draft.expires_at) fail(Errc::expired, "offer expired");
    if (!draft.entry().mentions(counterparty.key_id) || counterparty.key_id == draft.offer_sig->signer)
        fail(Errc::not_a_party, "acceptor is not the counterparty");
    if (draft.proposal.mode == Mode::digital_cheque && counterparty.key_id != draft.entry().events.front().to_agent)
        fail(Errc::not_a_party, "only the cheque receiver can cash it");
    const auto payload = party_payload(draft.proposal);
    if (!verify_signature(*draft.offer_sig, payload)) fail(Errc::signature_invalid, "offer signature does not verify");
    draft.accept_sig = sign(counterparty, payload);
    draft.state = DraftState::accepted;
    return draft;
}

TransactionDraft SharedTransactionRepository::reject(TransactionDraft draft) const
{
    if (draft.state == DraftState::validated) fail(Errc::wrong_state, "validated drafts are final");
    draft.state = DraftState::rejected;
    return draft;
}

SignedReceipt SharedTransactionRepository::validate(const TransactionDraft& draft)
{
    const auto& p = draft.proposal;
    if (draft.state == DraftState::validated || draft.state == DraftState::rejected ||
        draft.state == DraftState::expired || draft.state == DraftState::drafted)
        fail(Errc::wrong_state, "cannot validate a " + std::string(to_string(draft.state)) + " draft");
    if (p.mode != config_.mode) fail(Errc::invariant_violation, "draft mode differs from the repository mode");
    if (p.coinbase) fail(Errc::invariant_violation, "coinbases are minted, not validated");
    if (clock_->now() > draft.expires_at) fail(Errc::expired, "draft expired before validation");
    if (auto bad = check_shape(p)) fail(Errc::invariant_violation, *bad);
    if (!draft.offer_sig) fail(Errc::wrong_state, "draft was never offered");

    switch (p.mode) {
    case Mode::joint_suite:
        if (draft.state != DraftState::accepted || !draft.accept_sig)
            fail(Errc::wrong_state, "joint suite entries need acceptance before validation");
        break;
    case Mode::digital_cheque:
        check_cheque(draft);
        break;
    case Mode::digital_cash:
        if (draft.accept_sig) fail(Errc::invariant_violation, "cash drafts carry no acceptance");
        break;
    }

    const auto payload = party_payload(p);
    if (!verify_signature(*draft.offer_sig, payload)) fail(Errc::signature_invalid, "offer signature does not verify");
    if (draft.accept_sig && !verify_signature(*draft.accept_sig, payload))
        fail(Errc::signature_invalid, "acceptance signature does not verify");
    if (auto bad = check_signers(p, *draft.offer_sig, draft.accept_sig)) fail(Errc::signature_invalid, *bad);

    SignedReceipt receipt;
    {
        std::unique_lock lock(mutex_);
        receipt = commit_locked(p, *draft.offer_sig, draft.accept_sig);
    }
    forward(receipt);
    return receipt;
}

SignedReceipt SharedTransactionRepository::mint_coinbase(const KeyPair& validator, Amount amount, Amount collected_fees)
{
    if (config_.mode != Mode::digital_cash) fail(Errc::invariant_violation, "minting requires digital cash mode");
    if (!is_validator(validator.key_id)) fail(Errc::not_validator, "only validators mint coinbases");

    SignedReceipt receipt;
    {
        std::unique_lock lock(mutex_);
        if (collected_fees > utxo_.fee_pool())
            fail(Errc::insufficient_input, "coinbase claims more fees than were collected");
        auto proposal = make_coinbase_proposal(validator.key_id, amount, collected_fees, config_.cash_resource,
                                               "coinbase." + std::to_string(log_.size()), clock_->now());
        const auto offer_sig = sign(validator, party_payload(proposal));
        receipt = commit_locked(proposal, offer_sig, std::nullopt);
    }
    forward(receipt);
    return receipt;
}

SignedReceipt SharedTransactionRepository::commit_locked(const Proposal& proposal, const Signature& offer_sig,
                                                         const std::optional<Signature>& accept_sig)
{
    if (committed_drafts_.contains(proposal.draft_id)) fail(Errc::conflict, "draft already committed");
    if (committed_entries_.contains(proposal.entry.entry_id)) fail(Errc::conflict, "entry already committed");

    SignedReceipt r;
    r.seq = log_.size();
    r.prev_digest = log_.head_digest();
    r.committed_at = clock_->now();
    r.proposal = proposal;
    r.offer_sig = offer_sig;
    r.accept_sig = accept_sig;

    if (proposal.mode == Mode::digital_cash && !proposal.coinbase) {
        const auto check = check_cash(*proposal.cash, offer_sig.signer, utxo_);
        if (check.change > 0) r.change = check.change;
    }

    if (config_.server_signs) {
        const auto payload = validator_payload(r);
        for (const auto& v : validators_)
            if (auto sig = v->endorse(payload)) r.validator_sigs.push_back(std::move(*sig));
        if (r.validator_sigs.size() < config_.quorum)
            fail(Errc::quorum_not_met, std::to_string(r.validator_sigs.size()) + " of " +
                                           std::to_string(config_.quorum) + " validator signatures");
    }
    r.receipt_id = compute_receipt_id(r);

    // Everything that can fail has run; the remaining steps only record.
    log_.append(r);
    index_.emplace(r.receipt_id, log_.size() - 1);
    utxo_.apply(r);
    acks_.observe(r, [this](const Digest& id) { return find_locked(id); });
    committed_drafts_.insert(proposal.draft_id);
    committed_entries_.insert(proposal.entry.entry_id);
    return r;
}

void SharedTransactionRepository::forward(const SignedReceipt& receipt) const
{
    if (!forwarder_) return;
    const auto& e = receipt.entry().events.front();
    for (const auto* agent : {&e.from_agent, &e.to_agent})
        if (*agent != coinbase_agent()) forwarder_(*agent, receipt);
}

void SharedTransactionRepository::set_forwarder(Forwarder forwarder)
{
    std::unique_lock lock(mutex_);
    forwarder_ = std::move(forwarder);
}

ChainPolicy SharedTransactionRepository::chain_policy() const
{
    ChainPolicy policy;
    for (const auto& v : validators_) policy.trusted_validators.push_back(v->key_id());
    policy.min_validator_sigs = config_.server_signs ? config_.quorum : 0;
    return policy;
}

ReceiptLog SharedTransactionRepository::log_snapshot() const
{
    std::shared_lock lock(mutex_);
    return log_;
}

std::size_t SharedTransactionRepository::size() const
{
    std::shared_lock lock(mutex_);
    return log_.size();
}

Digest SharedTransactionRepository::head_digest() const
{
    std::shared_lock lock(mutex_);
    return log_.head_digest();
}

UtxoSet SharedTransactionRepository::utxo_snapshot() const
{
    std::shared_lock lock(mutex_);
    return utxo_;
}

AckStatus SharedTransactionRepository::ack_status(const Digest& receipt_id) const
{
    std::shared_lock lock(mutex_);
    return acks_.status(receipt_id);
}

bool SharedTransactionRepository::is_validator(const KeyId& key_id) const
{
    return std::any_of(validators_.begin(), validators_.end(),
                       [&](const auto& v) { return v->key_id() == key_id; });
}

} // namespace tea
