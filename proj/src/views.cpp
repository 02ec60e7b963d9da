#include "tea/views.hpp"

#include <cstdio>
#include <sstream>

namespace tea {

namespace {

void require_chain(const ReceiptLog& log, const ChainPolicy& policy)
{
    const auto report = verify_chain(log, policy);
    if (!report.ok)
        fail(Errc::chain_broken, "seq " + std::to_string(*report.first_bad_seq) + ": " + report.reason);
}

std::string purpose_of(const SignedReceipt& r)
{
    if (r.is_coinbase()) return "coinbase";
    return r.entry().is_exchange() ? "exchange" : "payment";
}

/// Rows of every party touched by one receipt (coinbase source excluded).
template <class Sink>
void rows_of(const SignedReceipt& r, Sink&& sink)
{
    const auto& events = r.entry().events;
    const auto purpose = purpose_of(r);
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        const EconomicEvent* dual = events.size() == 2 ? &events[1 - i] : nullptr;
        auto make = [&](Direction dir, const AgentId& counterparty) {
            ViewRow row;
            row.receipt_id = r.receipt_id;
            row.direction = dir;
            row.resource_id = e.resource_id;
            row.quantity = e.quantity;
            row.counterparty = counterparty;
            row.occurred_at = e.occurred_at;
            row.purpose = purpose;
            if (dual) {
                row.counter_resource = dual->resource_id;
                row.counter_quantity = dual->quantity;
            }
            return row;
        };
        if (e.from_agent != coinbase_agent()) sink(e.from_agent, make(Direction::outflow, e.to_agent));
        sink(e.to_agent, make(Direction::inflow, e.from_agent));
    }
}

// Days since 1970-01-01 to civil date (proleptic Gregorian).
void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m)
{
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2 ? 1 : 0);
}

} // namespace

std::string_view to_string(Direction direction) noexcept
{
    return direction == Direction::inflow ? "inflow" : "outflow";
}

LedgerView project(const ReceiptLog& log, const AgentId& party, const StubBook& stubs, const ChainPolicy& policy)
{
    require_chain(log, policy);
    LedgerView view{party, {}};
    for (const auto& r : log.receipts()) {
        rows_of(r, [&](const AgentId& who, ViewRow row) {
            if (who != party) return;
            if (const auto it = stubs.find(r.receipt_id); it != stubs.end()) row.local_stub = it->second;
            view.rows.push_back(std::move(row));
        });
    }
    return view;
}

Amount balance(const ReceiptLog& log, const AgentId& party, std::string_view resource_id, const ChainPolicy& policy)
{
    require_chain(log, policy);
    Amount total = 0;
    for (const auto& r : log.receipts())
        rows_of(r, [&](const AgentId& who, const ViewRow& row) {
            if (who == party && row.resource_id == resource_id) total += row.signed_quantity();
        });
    return total;
}

std::map<BalanceKey, Amount> fold_balances(const ReceiptLog& log, const ChainPolicy& policy)
{
    require_chain(log, policy);
    std::map<BalanceKey, Amount> totals;
    for (const auto& r : log.receipts())
        rows_of(r, [&](const AgentId& who, const ViewRow& row) {
            totals[{who, row.resource_id}] += row.signed_quantity();
        });
    return totals;
}

void BalanceBook::apply(const SignedReceipt& receipt)
{
    for (const auto& e : receipt.entry().events) {
        if (e.from_agent != coinbase_agent()) balances_[{e.from_agent, e.resource_id}] -= e.quantity;
        balances_[{e.to_agent, e.resource_id}] += e.quantity;
    }
}

Amount BalanceBook::balance(const AgentId& party, std::string_view resource_id) const
{
    const auto it = balances_.find({party, std::string(resource_id)});
    return it == balances_.end() ? 0 : it->second;
}

std::string_view to_string(PivotDim dim) noexcept
{
    switch (dim) {
    case PivotDim::party: return "party";
    case PivotDim::resource: return "resource";
    case PivotDim::period: return "period";
    case PivotDim::purpose: return "purpose";
    }
    return "party";
}

std::vector<PivotDim> parse_dims(std::string_view csv)
{
    std::vector<PivotDim> dims;
    std::size_t start = 0;
    while (start <= csv.size() && !csv.empty()) {
        auto comma = csv.find(',', start);
        if (comma == std::string_view::npos) comma = csv.size();
        const auto name = csv.substr(start, comma - start);
        bool found = false;
        for (auto d : {PivotDim::party, PivotDim::resource, PivotDim::period, PivotDim::purpose})
            if (to_string(d) == name) {
                dims.push_back(d);
                found = true;
            }
        if (!found) fail(Errc::unknown_dimension, "unknown pivot dimension '" + std::string(name) + "'");
        start = comma + 1;
    }
    return dims;
}

std::string calendar_month(Timestamp t)
{
    std::int64_t days = t / 86400;
    if (t % 86400 < 0) --days;
    std::int64_t year = 0;
    unsigned month = 0;
    civil_from_days(days, year, month);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04lld-%02u", static_cast<long long>(year), month);
    return buf;
}

std::vector<PivotCell> pivot(const ReceiptLog& log, std::span<const PivotDim> dims, const ChainPolicy& policy)
{
    require_chain(log, policy);
    std::map<std::vector<std::string>, Amount> groups;
    for (const auto& r : log.receipts())
        rows_of(r, [&](const AgentId& who, const ViewRow& row) {
            std::vector<std::string> keys;
            for (auto d : dims) {
                switch (d) {
                case PivotDim::party: keys.push_back(who); break;
                case PivotDim::resource: keys.push_back(row.resource_id); break;
                case PivotDim::period: keys.push_back(calendar_month(row.occurred_at)); break;
                case PivotDim::purpose: keys.push_back(row.purpose); break;
                }
            }
            groups[std::move(keys)] += row.signed_quantity();
        });
    if (dims.empty()) groups.try_emplace({}, 0);
    std::vector<PivotCell> cells;
    for (auto& [keys, total] : groups) cells.push_back({keys, total});
    return cells;
}

std::vector<JournalEntry> export_double_entry(const LedgerView& view, const ResourceCatalog& catalog,
                                              const CostLookup& cost_of_goods)
{
    auto kind_of = [&](const std::string& id) {
        const auto* res = catalog.find(id);
        if (!res) fail(Errc::unmapped_resource_kind, "resource '" + id + "' is not in the catalog");
        return res->kind;
    };

    std::vector<JournalEntry> journal;
    for (const auto& row : view.rows) {
        const auto kind = kind_of(row.resource_id);
        const auto counter = row.counter_resource ? std::optional(kind_of(*row.counter_resource)) : std::nullopt;
        const bool in = row.direction == Direction::inflow;
        JournalEntry je;
        je.receipt_id = row.receipt_id;
        je.resource_id = row.resource_id;
        auto post = [&](std::string debit, std::string credit, Amount amount) {
            je.debit = {std::move(debit), amount};
            je.credit = {std::move(credit), amount};
        };

        if (kind == ResourceKind::currency) {
            if (!counter)
                in ? post("Cash", "Payable", row.quantity) : post("Receivable", "Cash", row.quantity);
            else if (*counter == ResourceKind::good)
                in ? post("Cash", "Sales", row.quantity) : post("Purchases", "Cash", row.quantity);
            else if (*counter == ResourceKind::currency)
                in ? post("Cash", "Exchange", row.quantity) : post("Exchange", "Cash", row.quantity);
            else
                fail(Errc::unmapped_resource_kind, "currency traded against an instrument");
        } else if (kind == ResourceKind::good && counter == ResourceKind::currency) {
            if (in) {
                post("Inventory", "Purchases", row.counter_quantity);
            } else {
                const auto cost = cost_of_goods ? cost_of_goods(row) : std::nullopt;
                post("COGS", "Inventory", cost.value_or(row.counter_quantity));
            }
        } else {
            fail(Errc::unmapped_resource_kind,
                 "no account mapping for " + std::string(to_string(kind)) + " row of '" + row.resource_id + "'");
        }
        journal.push_back(std::move(je));
    }
    return journal;
}

std::string journal_csv(const std::vector<JournalEntry>& journal)
{
    std::ostringstream out;
    out << "receipt_id,resource_id,debit_account,debit_amount,credit_account,credit_amount\n";
    for (const auto& je : journal)
        out << je.receipt_id.hex() << ',' << je.resource_id << ',' << je.debit.account << ',' << je.debit.amount << ','
            << je.credit.account << ',' << je.credit.amount << '\n';
    return out.str();
}

} // namespace tea
