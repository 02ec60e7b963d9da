#include "tea/payment.hpp"

#include <algorithm>
#include <set>

namespace tea {

std::vector<CashOutput> receipt_outputs(const SignedReceipt& receipt)
{
    std::vector<CashOutput> outputs;
    if (!receipt.proposal.cash) return outputs;
    outputs = receipt.proposal.cash->outputs;
    if (receipt.change && *receipt.change > 0) outputs.push_back({receipt.offer_sig.signer, *receipt.change});
    return outputs;
}

const UtxoEntry* UtxoSet::find(const Outpoint& outpoint) const
{
    const auto it = entries_.find(outpoint);
    return it == entries_.end() ? nullptr : &it->second;
}

void UtxoSet::apply(const SignedReceipt& receipt)
{
    const auto& cash = receipt.proposal.cash;
    if (!cash) return;
    for (const auto& in : cash->inputs) {
        auto it = entries_.find(in);
        if (it == entries_.end()) fail(Errc::unknown_outpoint, to_string(in));
        if (it->second.spent()) fail(Errc::double_spend, to_string(in));
        it->second.spent_by = receipt.receipt_id;
    }
    const auto outputs = receipt_outputs(receipt);
    for (std::uint32_t i = 0; i < outputs.size(); ++i) {
        Outpoint op{receipt.receipt_id, i};
        entries_[op] = UtxoEntry{op, outputs[i].owner, outputs[i].amount, std::nullopt};
    }
    fees_ += cash->fee;
    if (receipt.proposal.coinbase) {
        minted_ += receipt.proposal.coinbase->minted;
        recycled_ += receipt.proposal.coinbase->recycled_fees;
    }
}

std::vector<UtxoEntry> UtxoSet::unspent() const
{
    std::vector<UtxoEntry> out;
    for (const auto& [op, e] : entries_)
        if (!e.spent()) out.push_back(e);
    return out;
}

std::vector<UtxoEntry> UtxoSet::unspent_of(const AgentId& owner) const
{
    std::vector<UtxoEntry> out;
    for (const auto& [op, e] : entries_)
        if (!e.spent() && e.owner == owner) out.push_back(e);
    return out;
}

Amount UtxoSet::unspent_total() const noexcept
{
    Amount total = 0;
    for (const auto& [op, e] : entries_)
        if (!e.spent()) total += e.amount;
    return total;
}

UtxoSet rebuild_utxo(const std::vector<SignedReceipt>& receipts)
{
    UtxoSet set;
    for (const auto& r : receipts) set.apply(r);
    return set;
}

CashCheck check_cash(const CashTransaction& tx, const AgentId& spender, const UtxoSet& utxo)
{
    if (tx.inputs.empty()) fail(Errc::insufficient_input, "a spend needs at least one input");
    if (tx.fee < 0) fail(Errc::invariant_violation, "negative fee");
    for (const auto& o : tx.outputs)
        if (o.amount <= 0) fail(Errc::invariant_violation, "output amounts must be positive");

    CashCheck result;
    std::set<Outpoint> seen;
    for (const auto& in : tx.inputs) {
        if (!seen.insert(in).second) fail(Errc::double_spend, "input listed twice: " + to_string(in));
        const auto* entry = utxo.find(in);
        if (!entry) fail(Errc::unknown_outpoint, to_string(in));
        if (entry->spent()) fail(Errc::double_spend, to_string(in) + " already spent by " + entry->spent_by->hex());
        if (entry->owner != spender) fail(Errc::not_owner, to_string(in) + " is not owned by the spender");
        result.input_total += entry->amount;
    }
    const Amount required = tx.output_total() + tx.fee;
    if (result.input_total < required)
        fail(Errc::insufficient_input, "inputs " + std::to_string(result.input_total) + " < outputs + fee " +
                                           std::to_string(required));
    result.change = result.input_total - required;
    return result;
}

void check_cash_shape(const Proposal& proposal)
{
    if (!proposal.cash) fail(Errc::invariant_violation, "cash proposal without a cash transaction");
    const auto& entry = proposal.entry;
    if (entry.events.size() != 1) fail(Errc::invariant_violation, "cash entries carry exactly one event");
    const auto& event = entry.events.front();
    if (proposal.cash->outputs.empty()) fail(Errc::invariant_violation, "cash transaction has no outputs");
    for (const auto& o : proposal.cash->outputs)
        if (o.owner != event.to_agent) fail(Errc::invariant_violation, "every declared output must pay the payee");
    if (event.quantity != proposal.cash->output_total())
        fail(Errc::invariant_violation, "event quantity differs from declared outputs");
}

void check_cheque(const TransactionDraft& draft)
{
    if (draft.proposal.mode != Mode::digital_cheque) fail(Errc::invariant_violation, "not a cheque repository");
    if (!draft.offer_sig) fail(Errc::wrong_state, "cheque has not been issued");
    if (!draft.accept_sig) fail(Errc::missing_receiver_signature, "cheque receiver has not signed");
}

SharedEntry make_cash_entry(const AgentId& spender, const CashTransaction& tx, std::string resource_id,
                            std::string event_id, Timestamp occurred_at)
{
    if (tx.outputs.empty()) fail(Errc::invariant_violation, "cash transaction has no outputs");
    const auto& payee = tx.outputs.front().owner;
    for (const auto& o : tx.outputs)
        if (o.owner != payee) fail(Errc::invariant_violation, "a cash transaction pays a single payee");
    EconomicEvent event;
    event.event_id = std::move(event_id);
    event.resource_id = std::move(resource_id);
    event.quantity = tx.output_total();
    event.from_agent = spender;
    event.to_agent = payee;
    event.occurred_at = occurred_at;
    return make_payment(std::move(event));
}

Proposal make_coinbase_proposal(const AgentId& validator, Amount amount, Amount collected_fees,
                                std::string resource_id, std::string event_id, Timestamp occurred_at)
{
    if (amount < 0 || collected_fees < 0 || amount + collected_fees <= 0)
        fail(Errc::invariant_violation, "coinbase must create a positive amount");
    EconomicEvent event;
    event.event_id = std::move(event_id);
    event.resource_id = std::move(resource_id);
    event.quantity = amount + collected_fees;
    event.from_agent = coinbase_agent();
    event.to_agent = validator;
    event.occurred_at = occurred_at;

    Proposal p;
    p.mode = Mode::digital_cash;
    p.entry = make_payment(std::move(event));
    p.cash = CashTransaction{{}, {{validator, amount + collected_fees}}, 0};
    p.coinbase = CoinbaseInfo{amount, collected_fees};
    p.draft_id = Digest::of("coinbase:" + p.entry.entry_id.hex()).hex();
    return p;
}

AckStatus acknowledge_by_spend(const Proposal& spending, const AgentId& spender, const SignedReceipt& prior)
{
    if (!spending.cash) fail(Errc::invariant_violation, "acknowledgment requires a cash spend");
    const bool references = std::any_of(spending.cash->inputs.begin(), spending.cash->inputs.end(),
                                        [&](const Outpoint& op) { return op.receipt_id == prior.receipt_id; });
    if (!references) fail(Errc::invariant_violation, "spend does not reference the prior receipt");
    if (prior.entry().payee() != spender) fail(Errc::not_payee, "only the payee acknowledges by spending");
    return AckStatus::acknowledged;
}

void AcknowledgmentTable::observe(const SignedReceipt& receipt, const Lookup& lookup)
{
    if (receipt.mode() != Mode::digital_cash) return;
    status_.try_emplace(receipt.receipt_id, AckStatus::pending);
    if (!receipt.proposal.cash) return;
    const auto& spender = receipt.offer_sig.signer;
    for (const auto& in : receipt.proposal.cash->inputs) {
        const auto* prior = lookup(in.receipt_id);
        if (!prior) continue;
        // Spending one's own change does not acknowledge someone else's payment.
        if (prior->entry().payee() == spender) status_[in.receipt_id] = AckStatus::acknowledged;
    }
}

AckStatus AcknowledgmentTable::status(const Digest& receipt_id) const
{
    const auto it = status_.find(receipt_id);
    return it == status_.end() ? AckStatus::pending : it->second;
}

std::size_t AcknowledgmentTable::acknowledged_count() const noexcept
{
    return static_cast<std::size_t>(std::count_if(status_.begin(), status_.end(), [](const auto& kv) {
        return kv.second == AckStatus::acknowledged;
    }));
}

AcknowledgmentTable rebuild_acknowledgments(const std::vector<SignedReceipt>& receipts)
{
    AcknowledgmentTable table;
    std::map<Digest, const SignedReceipt*> by_id;
    for (const auto& r : receipts) {
        table.observe(r, [&](const Digest& id) -> const SignedReceipt* {
            const auto it = by_id.find(id);
            return it == by_id.end() ? nullptr : it->second;
        });
        by_id.emplace(r.receipt_id, &r);
    }
    return table;
}

} // namespace tea
