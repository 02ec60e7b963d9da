#include <doctest.h>

#include "tea/harness.hpp"

using namespace tea;

namespace {

Scenario builtin(std::string_view name)
{
    auto s = find_builtin(name);
    REQUIRE(s);
    return *s;
}

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

} // namespace

TEST_SUITE("harness")
{
    TEST_CASE("builtin catalogue")
    {
        const auto all = builtin_scenarios();
        CHECK(all.size() >= 6);
        std::set<std::string> names;
        for (const auto& s : all) names.insert(s.name);
        for (const auto* n : {"bicycle", "cheque", "cash", "coinbase", "crash_recovery", "tamper_detection"})
            CHECK(names.contains(n));
    }

    TEST_CASE("every builtin passes its own assertions and is seed-stable")
    {
        for (const auto& s : builtin_scenarios()) {
            CAPTURE(s.name);
            const auto first = run(s);
            for (const auto& p : first.properties) {
                CAPTURE(p.name);
                CAPTURE(p.detail);
                CHECK(p.passed);
            }
            CHECK(first == run(s));
        }
    }

    TEST_CASE("bicycle commits three receipts")
    {
        const auto r = run(builtin("bicycle"));
        CHECK(r.receipts_committed == 3);
        CHECK(r.errors.empty());
        CHECK(r.store_digests.size() == 4);
        CHECK(r.store_digests.at("alice") != r.store_digests.at("bob"));
    }

    TEST_CASE("crash after the first receipt leaves the report unchanged")
    {
        const auto base = builtin("bicycle");
        const auto crashed = with_fault(base, 3, "crash_str");
        CHECK(crashed.script[3].verb == "crash_str");
        CHECK(run(crashed) == run(base));
    }

    TEST_CASE("duplicating every delivery leaves the stores unchanged")
    {
        for (const auto* name : {"bicycle", "cash"}) {
            const auto base = builtin(name);
            Scenario dup = base;
            dup.script.clear();
            for (const auto& step : base.script) {
                dup.script.push_back({"duplicate_next", {}});
                dup.script.push_back(step);
            }
            const auto a = run(base);
            const auto b = run(dup);
            CHECK(a.store_digests == b.store_digests);
            CHECK(a.log_text == b.log_text);
        }
    }

    TEST_CASE("delivery faults are repaired by anti-entropy")
    {
        auto s = builtin("bicycle");
        s.script.insert(s.script.begin() + 3, {"drop_next", {}});
        s.script.push_back({"drop_next", {}});
        const auto r = run(s);
        CHECK(r.all_passed());
        CHECK(r.store_digests == run(builtin("bicycle")).store_digests);
    }

    TEST_CASE("seeds change keys but not outcomes")
    {
        auto s = builtin("cash");
        const auto a = run(s);
        s.seed = 1234;
        const auto b = run(s);
        CHECK(b.all_passed());
        CHECK(a.receipts_committed == b.receipts_committed);
        CHECK(a.head_digest != b.head_digest);
    }

    TEST_CASE("unexpected outcomes fail the expectations property")
    {
        auto s = builtin("bicycle");
        s.script.push_back(ScenarioStep::parse("validate draft=buy1 expect=DoubleSpend"));
        const auto r = run(s);
        CHECK_FALSE(r.all_passed());
        REQUIRE_FALSE(r.errors.empty());
        CHECK(r.errors.back().code == Errc::wrong_state);
        CHECK_FALSE(r.errors.back().expected);
    }

    TEST_CASE("invalid scripts")
    {
        auto s = builtin("bicycle");
        s.script.push_back(ScenarioStep::parse("dance with=bob"));
        CHECK(code_of([&] { run(s); }) == Errc::script_invalid);

        s = builtin("bicycle");
        s.script.push_back(ScenarioStep::parse("accept draft=nope by=bob"));
        CHECK(code_of([&] { run(s); }) == Errc::script_invalid);

        s = builtin("bicycle");
        s.assertions.push_back("sunny");
        CHECK(code_of([&] { run(s); }) == Errc::script_invalid);

        CHECK(code_of([&] { ScenarioStep::parse("offer draft"); }) == Errc::script_invalid);
        CHECK(code_of([&] { with_fault(s, 0, "offer"); }) == Errc::script_invalid);
    }

    TEST_CASE("scenario files round trip through the canonical encoding")
    {
        for (const auto& s : builtin_scenarios()) {
            const auto text = canonical_encode(s);
            const auto back = canonical_decode<Scenario>(text);
            CHECK(canonical_encode(back) == text);
            CHECK(run(back) == run(s));
        }
    }

    TEST_CASE("party stores deduplicate and verify")
    {
        const auto r = run(builtin("bicycle"));
        const auto log = ReceiptLog::parse(r.log_text);
        const auto& first = log.receipts()[0];
        PartyStore store(first.entry().payer());
        CHECK(store.receive(canonical_encode(first)));
        CHECK_FALSE(store.receive(canonical_encode(first)));
        CHECK(store.receipts().size() == 1);

        auto forged = first;
        forged.committed_at += 1;
        CHECK(code_of([&] { store.receive(canonical_encode(forged)); }) == Errc::signature_invalid);

        PartyStore outsider(derive_keypair(0, "nobody").key_id);
        CHECK(code_of([&] { outsider.receive(canonical_encode(first)); }) == Errc::not_a_party);
    }

    TEST_CASE("reports render")
    {
        const auto r = run(builtin("cheque"));
        const auto text = format_report_text(r);
        CHECK(text.find("result: PASS") != std::string::npos);
        CHECK(text.find("MissingReceiverSignature (expected)") != std::string::npos);
        const auto json = format_report_json(r);
        CHECK(json.find("\"passed\": true") != std::string::npos);
    }
}
