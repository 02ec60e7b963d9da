#include "tea/accounting.hpp"

#include <charconv>
#include <numeric>
#include <sstream>

namespace tea {

std::string_view to_string(CostMethod method) noexcept
{
    switch (method) {
    case CostMethod::avco: return "avco";
    case CostMethod::fifo: return "fifo";
    case CostMethod::lifo: return "lifo";
    }
    return "avco";
}

CostMethod parse_cost_method(std::string_view text)
{
    if (text == "avco" || text == "AVCO") return CostMethod::avco;
    if (text == "fifo" || text == "FIFO") return CostMethod::fifo;
    if (text == "lifo" || text == "LIFO") return CostMethod::lifo;
    fail(Errc::decode_error, "unknown cost method '" + std::string(text) + "'");
}

Inventory::Inventory(CostMethod method, AgentId holder) : method_(method), holder_(std::move(holder)) {}

void Inventory::add_unit(Amount cost)
{
    if (cost <= 0) fail(Errc::non_positive_cost, "unit cost must be positive");
    if (method_ == CostMethod::avco) {
        avco_value_ += cost;
        avco_count_ += 1;
    } else {
        costs_.push_back(cost);
    }
}

ProfitRecord Inventory::sell_unit(Amount price, const AgentId& buyer, std::optional<Digest> receipt_id)
{
    if (!holder_.empty() && buyer == holder_) fail(Errc::self_purchase, "owner cannot purchase own units");
    if (count() == 0) fail(Errc::empty_inventory, "no units to sell");

    Amount cogs = 0;
    switch (method_) {
    case CostMethod::avco:
        cogs = avco_value_ / avco_count_;
        avco_value_ -= cogs;
        avco_count_ -= 1;
        break;
    case CostMethod::fifo:
        cogs = costs_.front();
        costs_.pop_front();
        break;
    case CostMethod::lifo:
        cogs = costs_.back();
        costs_.pop_back();
        break;
    }
    return {receipt_id, price, cogs, price - cogs};
}

Amount Inventory::total_value() const noexcept
{
    if (method_ == CostMethod::avco) return avco_value_;
    return std::accumulate(costs_.begin(), costs_.end(), Amount{0});
}

std::int64_t Inventory::count() const noexcept
{
    return method_ == CostMethod::avco ? avco_count_ : static_cast<std::int64_t>(costs_.size());
}

Amount Inventory::residue() const noexcept
{
    if (method_ != CostMethod::avco || avco_count_ == 0) return 0;
    return avco_value_ - avco_count_ * (avco_value_ / avco_count_);
}

Inventory add_unit(Inventory inventory, Amount cost)
{
    inventory.add_unit(cost);
    return inventory;
}

std::pair<Inventory, ProfitRecord> sell_unit(Inventory inventory, Amount price, const AgentId& buyer)
{
    auto record = inventory.sell_unit(price, buyer);
    return {std::move(inventory), record};
}

std::vector<Amount> split_amount(Amount total, std::int64_t parts)
{
    if (parts <= 0) fail(Errc::invariant_violation, "cannot split into non-positive parts");
    std::vector<Amount> out(static_cast<std::size_t>(parts), total / parts);
    for (Amount i = 0; i < total % parts; ++i) out[static_cast<std::size_t>(i)] += 1;
    return out;
}

ReplayResult replay_inventory(const LedgerView& view, const ResourceCatalog& catalog, CostMethod method,
                              const std::optional<std::string>& only_resource)
{
    ReplayResult result;
    for (const auto& row : view.rows) {
        if (only_resource && row.resource_id != *only_resource) continue;
        if (!only_resource) {
            const auto* res = catalog.find(row.resource_id);
            if (!res || res->kind != ResourceKind::good) continue;
        }
        // With an explicit resource, an uncatalogued counter-leg is taken to be the price.
        bool priced = false;
        if (row.counter_resource) {
            const auto* counter = catalog.find(*row.counter_resource);
            priced = counter ? counter->kind == ResourceKind::currency : only_resource.has_value();
        }
        if (!priced)
            fail(Errc::invariant_violation, "goods movement in receipt " + row.receipt_id.hex() +
                                                " has no currency consideration to price it");

        auto [it, _] = result.inventories.try_emplace(row.resource_id, method, view.party);
        auto& inv = it->second;
        const auto shares = split_amount(row.counter_quantity, row.quantity);
        if (row.direction == Direction::inflow) {
            for (auto cost : shares) inv.add_unit(cost);
        } else {
            Amount cogs = 0;
            for (auto price : shares) {
                auto rec = inv.sell_unit(price, row.counterparty, row.receipt_id);
                cogs += rec.cogs;
                result.profits.push_back(rec);
            }
            result.cogs_by_receipt[row.receipt_id] += cogs;
        }
    }
    return result;
}

// --- momentum ---------------------------------------------------------------

std::string_view to_string(Column column) noexcept
{
    switch (column) {
    case Column::debit: return "debit";
    case Column::credit: return "credit";
    case Column::trebit: return "trebit";
    }
    return "debit";
}

MomentumReport momentum_report(std::span<const WealthPoint> series)
{
    if (series.size() < 2) fail(Errc::insufficient_points, "momentum needs at least two wealth points");
    for (std::size_t i = 1; i < series.size(); ++i)
        if (series[i].t <= series[i - 1].t) fail(Errc::non_monotonic_time, "times must strictly increase");

    MomentumReport report;
    report.periods.assign(series.begin(), series.end());
    for (std::size_t i = 1; i < series.size(); ++i) {
        const auto duration = series[i].t - series[i - 1].t;
        MomentumInterval iv;
        iv.t_begin = series[i - 1].t;
        iv.t_end = series[i].t;
        iv.momentum = Rational(series[i].wealth - series[i - 1].wealth, duration);
        iv.income = iv.momentum * duration;
        report.intervals.push_back(iv);
    }
    for (std::size_t i = 1; i < report.intervals.size(); ++i) {
        const auto& a = report.intervals[i - 1];
        const auto& b = report.intervals[i];
        // Midpoint spacing: ((b.begin + b.end) - (a.begin + a.end)) / 2.
        const Rational spacing((b.t_begin + b.t_end) - (a.t_begin + a.t_end), 2);
        report.forces.push_back((b.momentum - a.momentum) / spacing);
    }

    for (const auto& p : report.periods)
        report.lines.push_back({Column::debit, "wealth@" + std::to_string(p.t), Rational(p.wealth)});
    for (const auto& iv : report.intervals) {
        const auto span = std::to_string(iv.t_begin) + ".." + std::to_string(iv.t_end);
        report.lines.push_back({Column::credit, "momentum " + span, iv.momentum});
        report.lines.push_back({Column::credit, "income " + span, iv.income});
    }
    for (std::size_t i = 0; i < report.forces.size(); ++i) {
        const auto& a = report.intervals[i];
        const auto& b = report.intervals[i + 1];
        report.lines.push_back({Column::trebit,
                                "force " + std::to_string(a.t_begin) + ".." + std::to_string(b.t_end),
                                report.forces[i]});
    }
    return report;
}

std::vector<WealthPoint> parse_wealth_csv(std::string_view text)
{
    std::vector<WealthPoint> points;
    std::size_t start = 0;
    bool first = true;
    auto parse_int = [](std::string_view s, std::int64_t& out) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
    };
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        WealthPoint p;
        const bool ok = comma != std::string_view::npos && parse_int(line.substr(0, comma), p.t) &&
                        parse_int(line.substr(comma + 1), p.wealth);
        if (!ok) {
            if (first) {
                first = false;
                continue; // header
            }
            fail(Errc::decode_error, "bad series line '" + std::string(line) + "'");
        }
        first = false;
        points.push_back(p);
    }
    return points;
}

std::string format_rational(const Rational& value)
{
    if (value.denominator() == 1) return std::to_string(value.numerator());
    return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

std::string format_report(const MomentumReport& report)
{
    std::ostringstream out;
    out << "column,label,value\n";
    for (const auto& line : report.lines)
        out << to_string(line.column) << ',' << line.label << ',' << format_rational(line.value) << '\n';
    return out.str();
}

} // namespace tea
