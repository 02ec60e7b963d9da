#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tea/accounting.hpp"

using namespace tea;

namespace {

Errc code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::io_error;
}

oracle::Bag::Rule rule_for(CostMethod m)
{
    switch (m) {
    case CostMethod::avco: return oracle::Bag::Rule::average;
    case CostMethod::fifo: return oracle::Bag::Rule::earliest;
    case CostMethod::lifo: return oracle::Bag::Rule::latest;
    }
    return oracle::Bag::Rule::average;
}

} // namespace

TEST_SUITE("accounting")
{
    TEST_CASE("adding units")
    {
        Inventory avco(CostMethod::avco);
        avco.add_unit(7000);
        avco.add_unit(8000);
        CHECK(avco.total_value() == 15000);
        CHECK(avco.count() == 2);
        CHECK(code_of([&] { avco.add_unit(0); }) == Errc::non_positive_cost);
        CHECK(code_of([&] { avco.add_unit(-1); }) == Errc::non_positive_cost);

        auto fifo = add_unit(add_unit(Inventory(CostMethod::fifo), 7000), 8000);
        CHECK(std::vector<Amount>(fifo.unit_costs().begin(), fifo.unit_costs().end()) == std::vector<Amount>{7000, 8000});
    }

    TEST_CASE("selling one bicycle of two")
    {
        auto stocked = [](CostMethod m) { return add_unit(add_unit(Inventory(m, "alice"), 7000), 8000); };
        auto [a, pa] = sell_unit(stocked(CostMethod::avco), 10000, "charlie");
        CHECK(pa.cogs == 7500);
        CHECK(pa.profit == 2500);
        CHECK(a.total_value() == 7500);

        auto [f, pf] = sell_unit(stocked(CostMethod::fifo), 10000, "charlie");
        CHECK(pf.profit == 3000);
        CHECK(f.unit_costs().front() == 8000);

        auto [l, pl] = sell_unit(stocked(CostMethod::lifo), 10000, "charlie");
        CHECK(pl.profit == 2000);
        CHECK(l.unit_costs().front() == 7000);
    }

    TEST_CASE("sale errors")
    {
        Inventory inv(CostMethod::fifo, "alice");
        CHECK(code_of([&] { inv.sell_unit(100, "bob"); }) == Errc::empty_inventory);
        inv.add_unit(50);
        CHECK(code_of([&] { inv.sell_unit(100, "alice"); }) == Errc::self_purchase);
        CHECK(inv.count() == 1);
    }

    TEST_CASE("average cost truncates and keeps the residue")
    {
        Inventory inv(CostMethod::avco);
        inv.add_unit(10);
        inv.add_unit(10);
        inv.add_unit(11);
        const auto rec = inv.sell_unit(20);
        CHECK(rec.cogs == 10);
        CHECK(inv.total_value() == 21);
        CHECK(inv.residue() == 1);
        inv.sell_unit(20);
        inv.sell_unit(20);
        CHECK(inv.count() == 0);
        CHECK(inv.total_value() == 0);
    }

    TEST_CASE("split_amount")
    {
        CHECK(split_amount(10, 3) == std::vector<Amount>{4, 3, 3});
        CHECK(split_amount(9, 3) == std::vector<Amount>{3, 3, 3});
        CHECK(split_amount(7, 1) == std::vector<Amount>{7});
    }

    TEST_CASE("replaying the bicycle log")
    {
        test::World w;
        w.bicycle();
        const auto view = project(w.str.log_snapshot(), w.alice.key_id);
        const auto catalog = test::bicycle_catalog();
        CHECK(replay_inventory(view, catalog, CostMethod::avco).profits.at(0).profit == 2500);
        CHECK(replay_inventory(view, catalog, CostMethod::fifo).profits.at(0).profit == 3000);
        CHECK(replay_inventory(view, catalog, CostMethod::lifo).profits.at(0).profit == 2000);
        const auto only = replay_inventory(view, ResourceCatalog{}, CostMethod::avco, std::string("bicycle"));
        REQUIRE(only.profits.size() == 1);
        CHECK(only.profits[0].profit == 2500);
        CHECK(replay_inventory(view, ResourceCatalog{}, CostMethod::avco).profits.empty());

        const auto replay = replay_inventory(view, catalog, CostMethod::fifo);
        const CostLookup cost = [&](const ViewRow& row) -> std::optional<Amount> {
            const auto it = replay.cogs_by_receipt.find(row.receipt_id);
            return it == replay.cogs_by_receipt.end() ? std::nullopt : std::optional<Amount>(it->second);
        };
        bool saw_cogs = false;
        for (const auto& je : export_double_entry(view, catalog, cost))
            if (je.debit.account == "COGS") {
                CHECK(je.debit.amount == 7000);
                saw_cogs = true;
            }
        CHECK(saw_cogs);
    }

    TEST_CASE("property: inventories agree with the bag oracle")
    {
        std::mt19937_64 rng(99);
        for (auto method : {CostMethod::avco, CostMethod::fifo, CostMethod::lifo}) {
            for (int run = 0; run < 50; ++run) {
                Inventory inv(method, "holder");
                oracle::Bag bag(rule_for(method));
                Amount added = 0, cogs = 0;
                for (int step = 0; step < 200; ++step) {
                    if (bag.empty() || rng() % 3 != 0) {
                        const Amount cost = 1 + static_cast<Amount>(rng() % 10000);
                        inv.add_unit(cost);
                        bag.add(cost);
                        added += cost;
                    } else {
                        const auto rec = inv.sell_unit(static_cast<Amount>(rng() % 20000), "buyer");
                        CHECK(rec.cogs == bag.sell());
                        cogs += rec.cogs;
                    }
                    CHECK(cogs + inv.total_value() == added);
                    CHECK(inv.count() == static_cast<std::int64_t>(bag.size()));
                    if (method == CostMethod::avco && inv.count() > 0) CHECK(inv.residue() < inv.count());
                }
            }
        }
    }

    TEST_CASE("momentum of two points")
    {
        const std::vector<WealthPoint> s{{2019, 100}, {2020, 160}};
        const auto r = momentum_report(s);
        REQUIRE(r.intervals.size() == 1);
        CHECK(r.intervals[0].income == Rational(60));
        CHECK(r.intervals[0].momentum == Rational(60));
        CHECK(r.forces.empty());
    }

    TEST_CASE("force is the second difference")
    {
        const std::vector<WealthPoint> s{{0, 0}, {1, 60}, {2, 150}};
        const auto r = momentum_report(s);
        CHECK(r.intervals[0].income == Rational(60));
        CHECK(r.intervals[1].income == Rational(90));
        REQUIRE(r.forces.size() == 1);
        CHECK(r.forces[0] == Rational(30));
        int trebits = 0;
        for (const auto& l : r.lines) trebits += l.column == Column::trebit;
        CHECK(trebits == 1);
    }

    TEST_CASE("constant wealth")
    {
        const std::vector<WealthPoint> s{{0, 500}, {3, 500}, {10, 500}, {11, 500}};
        const auto r = momentum_report(s);
        for (const auto& iv : r.intervals) {
            CHECK(iv.momentum == Rational(0));
            CHECK(iv.income == Rational(0));
        }
        for (const auto& f : r.forces) CHECK(f == Rational(0));
    }

    TEST_CASE("momentum errors and parsing")
    {
        const std::vector<WealthPoint> one{{0, 1}};
        CHECK(code_of([&] { momentum_report(one); }) == Errc::insufficient_points);
        const std::vector<WealthPoint> back{{5, 1}, {5, 2}};
        CHECK(code_of([&] { momentum_report(back); }) == Errc::non_monotonic_time);

        const auto pts = parse_wealth_csv("t,wealth\n0,100\n30,160\n");
        REQUIRE(pts.size() == 2);
        CHECK(pts[1].t == 30);
        CHECK(pts[1].wealth == 160);
        CHECK(code_of([&] { parse_wealth_csv("0,1\nx,2\n"); }) == Errc::decode_error);
        CHECK(format_rational(Rational(-3, 6)) == "-1/2");
        CHECK(format_rational(Rational(4)) == "4");
        CHECK(format_report(momentum_report(pts)).find("income") != std::string::npos);
    }

    TEST_CASE("property: random series against finite differences")
    {
        std::mt19937_64 rng(5);
        for (int run = 0; run < 300; ++run) {
            std::vector<WealthPoint> s;
            std::vector<std::pair<std::int64_t, std::int64_t>> raw;
            std::int64_t t = static_cast<std::int64_t>(rng() % 100);
            const auto n = 2 + rng() % 12;
            for (std::size_t i = 0; i < n; ++i) {
                const auto wealth = static_cast<std::int64_t>(rng() % 200001) - 100000;
                s.push_back({t, wealth});
                raw.push_back({t, wealth});
                t += 1 + static_cast<std::int64_t>(rng() % 365);
            }
            const auto r = momentum_report(s);
            const auto o = oracle::differences(raw);
            Rational income_sum;
            for (std::size_t i = 0; i < r.intervals.size(); ++i) {
                CHECK(r.intervals[i].momentum.numerator() == o.slopes[i].n);
                CHECK(r.intervals[i].momentum.denominator() == o.slopes[i].d);
                income_sum += r.intervals[i].income;
            }
            CHECK(income_sum == Rational(s.back().wealth - s.front().wealth));
            REQUIRE(r.forces.size() == o.forces.size());
            for (std::size_t i = 0; i < r.forces.size(); ++i) {
                CHECK(r.forces[i].numerator() == o.forces[i].n);
                CHECK(r.forces[i].denominator() == o.forces[i].d);
            }
        }
    }
}
