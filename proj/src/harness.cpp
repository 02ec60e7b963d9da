#include "tea/harness.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tea {

// --- PartyStore --------------------------------------------------------------

bool PartyStore::receive(std::string_view receipt_bytes)
{
    const auto receipt = canonical_decode<SignedReceipt>(receipt_bytes);
    if (auto bad = receipt_defect(receipt)) fail(Errc::signature_invalid, *bad);
    if (!receipt.entry().mentions(owner_)) fail(Errc::not_a_party, "receipt does not name this party");
    return receipts_.try_emplace(receipt.receipt_id, receipt_bytes).second;
}

void PartyStore::annotate(const Digest& receipt_id, std::string stub)
{
    stubs_[receipt_id] = std::move(stub);
}

Digest PartyStore::digest() const
{
    std::string all;
    for (const auto& [id, bytes] : receipts_) all += id.hex() + "\n" + bytes;
    return Digest::of(all);
}

// --- scenario format ---------------------------------------------------------

std::string ScenarioStep::text() const
{
    std::string out = verb;
    for (const auto& [k, v] : args) out += " " + k + "=" + v;
    return out;
}

ScenarioStep ScenarioStep::parse(std::string_view text)
{
    ScenarioStep step;
    std::istringstream in{std::string(text)};
    std::string word;
    while (in >> word) {
        if (step.verb.empty()) {
            step.verb = word;
            continue;
        }
        const auto eq = word.find('=');
        if (eq == std::string::npos || eq == 0) fail(Errc::script_invalid, "expected key=value, got '" + word + "'");
        if (!step.args.emplace(word.substr(0, eq), word.substr(eq + 1)).second)
            fail(Errc::script_invalid, "repeated argument in '" + std::string(text) + "'");
    }
    if (step.verb.empty()) fail(Errc::script_invalid, "empty step");
    return step;
}

namespace {

template <class T, class F>
void encode_list(CanonicalWriter& w, std::string_view count_name, std::string_view item, const std::vector<T>& items,
                 F&& put)
{
    w.unsigned_integer(count_name, items.size());
    for (std::size_t i = 0; i < items.size(); ++i) put(std::string(item) + "." + std::to_string(i), items[i]);
}

template <class F>
auto decode_list(CanonicalReader& r, std::string_view count_name, std::string_view item, F&& get)
{
    const auto n = r.unsigned_integer(count_name);
    std::vector<decltype(get(std::string{}))> out;
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(get(std::string(item) + "." + std::to_string(i)));
    return out;
}

} // namespace

void encode_fields(CanonicalWriter& w, const Scenario& s)
{
    w.token("name", s.name)
        .unsigned_integer("seed", s.seed)
        .token("mode", to_string(s.mode))
        .boolean("server_signs", s.server_signs)
        .unsigned_integer("quorum", s.quorum)
        .timestamp("start", s.start);
    const auto put_token = [&](const std::string& n, const std::string& v) { w.token(n, v); };
    encode_list(w, "parties", "party", s.parties, put_token);
    encode_list(w, "validators", "validator", s.validators, put_token);
    encode_list(w, "steps", "step", s.script, [&](const std::string& n, const ScenarioStep& st) { w.text(n, st.text()); });
    encode_list(w, "asserts", "assert", s.assertions, put_token);
}

Scenario decode_fields(CanonicalReader& r, std::type_identity<Scenario>)
{
    Scenario s;
    s.name = r.token("name");
    s.seed = r.unsigned_integer("seed");
    s.mode = parse_mode(r.token("mode"));
    s.server_signs = r.boolean("server_signs");
    s.quorum = r.unsigned_integer("quorum");
    s.start = r.timestamp("start");
    const auto get_token = [&](const std::string& n) { return r.token(n); };
    s.parties = decode_list(r, "parties", "party", get_token);
    s.validators = decode_list(r, "validators", "validator", get_token);
    s.script = decode_list(r, "steps", "step", [&](const std::string& n) { return ScenarioStep::parse(r.text(n)); });
    s.assertions = decode_list(r, "asserts", "assert", get_token);
    return s;
}

// --- simulation --------------------------------------------------------------

namespace {

bool is_fault(std::string_view verb)
{
    return verb == "crash_str" || verb == "drop_next" || verb == "duplicate_next";
}

std::int64_t to_int(const std::string& text, std::string_view what)
{
    std::size_t used = 0;
    std::int64_t value = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) fail(Errc::script_invalid, std::string(what) + " is not an integer: " + text);
    return value;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

class Simulation {
public:
    explicit Simulation(const Scenario& scenario) : sc_(scenario), clock_(std::make_shared<ManualClock>(scenario.start))
    {
        if (sc_.validators.empty()) fail(Errc::script_invalid, "scenario needs at least one validator");
        for (const auto& name : sc_.parties) add_agent(name, derive_keypair(sc_.seed, name));
        for (const auto& name : sc_.validators) {
            auto key = derive_keypair(sc_.seed, "validator:" + name);
            validators_.push_back(std::make_shared<NotaryValidator>(key));
            add_agent(name, std::move(key));
        }
        config_.mode = sc_.mode;
        config_.server_signs = sc_.server_signs;
        config_.quorum = sc_.quorum;
        start_str(ReceiptLog{});
    }

    RunReport run()
    {
        report_.scenario = sc_.name;
        report_.seed = sc_.seed;
        std::size_t action = 0;
        for (const auto& step : sc_.script) {
            if (!is_fault(step.verb)) flush();
            std::optional<Errc> expected;
            if (auto it = step.args.find("expect"); it != step.args.end()) {
                expected = parse_errc(it->second);
                if (!expected) fail(Errc::script_invalid, "unknown error name " + it->second);
            }
            try {
                execute(step);
                if (expected) expectations_ok_ = false;
            } catch (const Error& e) {
                if (e.code() == Errc::script_invalid) throw;
                report_.errors.push_back({action, step.verb, e.code(), expected == e.code()});
                if (expected != e.code()) expectations_ok_ = false;
            }
            check_conservation();
            if (!is_fault(step.verb)) ++action;
        }
        flush();
        anti_entropy();
        return finish();
    }

private:
    void add_agent(const std::string& name, KeyPair key)
    {
        if (keys_.contains(name)) fail(Errc::script_invalid, "duplicate agent name " + name);
        names_[key.key_id] = name;
        stores_.emplace(name, PartyStore(key.key_id));
        keys_.emplace(name, std::move(key));
    }

    const KeyPair& key(const std::string& name) const
    {
        const auto it = keys_.find(name);
        if (it == keys_.end()) fail(Errc::script_invalid, "unknown agent " + name);
        return it->second;
    }

    static const std::string& arg(const ScenarioStep& step, const std::string& name)
    {
        const auto it = step.args.find(name);
        if (it == step.args.end()) fail(Errc::script_invalid, step.verb + " needs " + name + "=");
        return it->second;
    }

    static std::optional<std::string> opt_arg(const ScenarioStep& step, const std::string& name)
    {
        const auto it = step.args.find(name);
        return it == step.args.end() ? std::nullopt : std::optional<std::string>(it->second);
    }

    TransactionDraft& draft(const std::string& label)
    {
        const auto it = drafts_.find(label);
        if (it == drafts_.end()) fail(Errc::script_invalid, "unknown draft " + label);
        return it->second;
    }

    const Digest& receipt(const std::string& label) const
    {
        const auto it = receipts_.find(label);
        if (it == receipts_.end()) fail(Errc::script_invalid, "no committed receipt labelled " + label);
        return it->second;
    }

    void start_str(ReceiptLog log)
    {
        str_ = std::make_unique<SharedTransactionRepository>(config_, validators_, clock_, std::move(log));
        str_->set_forwarder([this](const AgentId& to, const SignedReceipt& r) {
            queue_.push_back({to, canonical_encode(r)});
        });
    }

    void commit(const std::string& label, const SignedReceipt& r)
    {
        receipts_[label] = r.receipt_id;
        if (!disk_.empty()) disk_.push_back('\n');
        disk_ += canonical_encode(r);
        committed_.push_back(r);
    }

    void deliver(const AgentId& to, const std::string& bytes)
    {
        const auto name = names_.find(to);
        if (name == names_.end()) return;
        try {
            stores_.at(name->second).receive(bytes);
        } catch (const Error& e) {
            delivery_faults_.push_back(name->second + ": " + e.what());
        }
    }

    void flush()
    {
        while (!queue_.empty()) {
            auto d = std::move(queue_.front());
            queue_.pop_front();
            if (drop_next_) {
                drop_next_ = false;
                continue;
            }
            deliver(d.to, d.bytes);
            if (duplicate_next_) {
                duplicate_next_ = false;
                deliver(d.to, d.bytes);
            }
        }
    }

    void reforward_all()
    {
        const auto log = str_->log_snapshot();
        for (const auto& [name, store] : stores_)
            for (const auto& r : recover_and_reforward(log, store.owner(), str_->chain_policy()))
                queue_.push_back({store.owner(), canonical_encode(r)});
    }

    void anti_entropy()
    {
        drop_next_ = duplicate_next_ = false;
        reforward_all();
        flush();
    }

    SharedEntry build_entry(const ScenarioStep& step, const std::string& label)
    {
        EconomicEvent give;
        give.event_id = label + ".give";
        give.resource_id = arg(step, "resource");
        give.quantity = to_int(arg(step, "qty"), "qty");
        give.from_agent = key(arg(step, "from")).key_id;
        give.to_agent = key(arg(step, "to")).key_id;
        give.occurred_at = clock_->now();
        const auto take_resource = opt_arg(step, "take_resource");
        if (!take_resource) return make_payment(std::move(give));
        EconomicEvent take;
        take.event_id = label + ".take";
        take.resource_id = *take_resource;
        take.quantity = to_int(arg(step, "take_qty"), "take_qty");
        take.from_agent = give.to_agent;
        take.to_agent = give.from_agent;
        take.occurred_at = give.occurred_at;
        return make_exchange(std::move(give), std::move(take));
    }

    void execute(const ScenarioStep& step)
    {
        const auto& v = step.verb;
        if (v == "open" || v == "offer") {
            const auto& label = arg(step, "draft");
            if (v == "offer" && !step.args.contains("from")) {
                auto& d = draft(label);
                d = str_->offer(d, key(arg(step, "by")));
                return;
            }
            if (drafts_.contains(label)) fail(Errc::script_invalid, "draft label reused: " + label);
            auto d = str_->open_draft(build_entry(step, label));
            if (v == "offer") d = str_->offer(std::move(d), key(arg(step, "by")));
            drafts_.emplace(label, std::move(d));
        } else if (v == "accept") {
            auto& d = draft(arg(step, "draft"));
            d = str_->accept(d, key(arg(step, "by")));
        } else if (v == "reject") {
            auto& d = draft(arg(step, "draft"));
            d = str_->reject(d);
        } else if (v == "validate") {
            const auto& label = arg(step, "draft");
            auto& d = draft(label);
            const auto r = str_->validate(d);
            d.state = DraftState::validated;
            commit(label, r);
        } else if (v == "spend") {
            const auto& label = arg(step, "label");
            CashTransaction tx;
            for (const auto& ref : split(arg(step, "inputs"), ',')) {
                const auto parts = split(ref, ':');
                if (parts.size() != 2) fail(Errc::script_invalid, "input must be label:index, got " + ref);
                tx.inputs.push_back({receipt(parts[0]), static_cast<std::uint32_t>(to_int(parts[1], "input index"))});
            }
            for (const auto& out : split(arg(step, "to"), ',')) {
                const auto parts = split(out, ':');
                if (parts.size() != 2) fail(Errc::script_invalid, "output must be party:amount, got " + out);
                tx.outputs.push_back({key(parts[0]).key_id, to_int(parts[1], "output amount")});
            }
            tx.fee = to_int(opt_arg(step, "fee").value_or("0"), "fee");
            const auto& spender = key(arg(step, "by"));
            auto entry = make_cash_entry(spender.key_id, tx, config_.cash_resource, label + ".pay", clock_->now());
            const auto d = str_->offer(std::move(entry), spender, tx);
            commit(label, str_->validate(d));
        } else if (v == "mint") {
            const auto r = str_->mint_coinbase(key(arg(step, "by")), to_int(arg(step, "amount"), "amount"),
                                               to_int(opt_arg(step, "fees").value_or("0"), "fees"));
            commit(arg(step, "label"), r);
        } else if (v == "stub") {
            const auto store = stores_.find(arg(step, "party"));
            if (store == stores_.end()) fail(Errc::script_invalid, "unknown party " + arg(step, "party"));
            store->second.annotate(receipt(arg(step, "draft")), arg(step, "text"));
        } else if (v == "crash_str") {
            queue_.clear();
            drop_next_ = duplicate_next_ = false;
            start_str(ReceiptLog::parse(disk_));
            reforward_all();
        } else if (v == "drop_next") {
            drop_next_ = true;
        } else if (v == "duplicate_next") {
            duplicate_next_ = true;
        } else if (v == "advance_clock") {
            clock_->advance(to_int(arg(step, "secs"), "secs"));
        } else if (v == "tamper_check") {
            tamper_check(to_int(opt_arg(step, "samples").value_or("16"), "samples"));
        } else {
            fail(Errc::script_invalid, "unknown verb " + v);
        }
    }

    // Flips sampled bytes of every block; each flip must be reported at that
    // block or the one after it.
    void tamper_check(std::int64_t samples)
    {
        if (samples <= 0) fail(Errc::script_invalid, "samples must be positive");
        const auto policy = str_->chain_policy();
        bool ok = verify_chain_text(disk_, policy).ok;
        std::size_t offset = 0;
        for (std::size_t k = 0; k < committed_.size(); ++k) {
            const auto len = canonical_encode(committed_[k]).size();
            const auto stride = std::max<std::size_t>(1, len / static_cast<std::size_t>(samples));
            for (std::size_t pos = sc_.seed % stride; pos < len; pos += stride) {
                auto copy = disk_;
                copy[offset + pos] = static_cast<char>(copy[offset + pos] ^ 0x01);
                const auto rep = verify_chain_text(copy, policy);
                if (rep.ok || !rep.first_bad_seq || *rep.first_bad_seq < k || *rep.first_bad_seq > k + 1) ok = false;
            }
            offset += len + 1;
        }
        tamper_ok_ = tamper_ok_.value_or(true) && ok;
    }

    // Independent fold over committed receipts: unspent outputs must equal
    // minted + recycled - fees.
    void check_conservation()
    {
        if (sc_.mode != Mode::digital_cash) return;
        std::map<Outpoint, Amount> outputs;
        std::set<Outpoint> spent;
        Amount minted = 0, fees = 0, recycled = 0;
        for (const auto& r : committed_) {
            if (!r.proposal.cash) continue;
            for (const auto& in : r.proposal.cash->inputs)
                if (!outputs.contains(in) || !spent.insert(in).second) {
                    conservation_ok_ = false;
                    return;
                }
            for (std::uint32_t i = 0; i < r.proposal.cash->outputs.size(); ++i)
                outputs[{r.receipt_id, i}] = r.proposal.cash->outputs[i].amount;
            if (r.change) outputs[{r.receipt_id, static_cast<std::uint32_t>(r.proposal.cash->outputs.size())}] = *r.change;
            fees += r.proposal.cash->fee;
            if (r.proposal.coinbase) {
                minted += r.proposal.coinbase->minted;
                recycled += r.proposal.coinbase->recycled_fees;
            }
        }
        Amount unspent = 0;
        for (const auto& [op, amount] : outputs)
            if (!spent.contains(op)) unspent += amount;
        if (unspent != minted + recycled - fees) conservation_ok_ = false;
        if (str_->utxo_snapshot().unspent_total() != unspent) conservation_ok_ = false;
    }

    PropertyOutcome check_wysiwis(const ReceiptLog& log) const
    {
        if (!delivery_faults_.empty()) return {"wysiwis", false, "rejected delivery: " + delivery_faults_.front()};
        std::map<Digest, std::string> canonical;
        for (const auto& r : log.receipts()) canonical[r.receipt_id] = canonical_encode(r);
        for (const auto& r : log.receipts()) {
            const auto& e = r.entry();
            for (const auto& [name, store] : stores_) {
                if (!e.mentions(store.owner())) continue;
                const auto it = store.receipts().find(r.receipt_id);
                if (it == store.receipts().end())
                    return {"wysiwis", false, name + " lacks receipt " + std::to_string(r.seq)};
                if (it->second != canonical[r.receipt_id])
                    return {"wysiwis", false, name + " holds different bytes for receipt " + std::to_string(r.seq)};
            }
        }
        for (const auto& [name, store] : stores_)
            for (const auto& [id, bytes] : store.receipts())
                if (!canonical.contains(id)) return {"wysiwis", false, name + " holds a receipt absent from the log"};
        return {"wysiwis", true, std::to_string(log.size()) + " receipts agree across parties"};
    }

    PropertyOutcome check_dominance(const ReceiptLog& log) const
    {
        for (const auto& [name, store] : stores_) {
            PartyStore rebuilt(store.owner());
            for (const auto& r : recover_and_reforward(log, store.owner(), str_->chain_policy()))
                rebuilt.receive(canonical_encode(r));
            if (rebuilt.digest() != store.digest())
                return {"dominance", false, name + "'s store differs from a rebuild from the log"};
        }
        return {"dominance", true, "every store rebuilds from the log"};
    }

    PropertyOutcome evaluate(const std::string& assertion, const ReceiptLog& log) const
    {
        const auto parts = split(assertion, ':');
        const auto& what = parts[0];
        if (assertion == "wysiwis") return check_wysiwis(log);
        if (assertion == "dominance") return check_dominance(log);
        if (assertion == "chain_valid") {
            const auto rep = verify_chain(log, str_->chain_policy());
            return {assertion, rep.ok, rep.ok ? "chain verifies" : rep.reason};
        }
        if (assertion == "conservation") return {assertion, conservation_ok_, "checked after every step"};
        if (assertion == "expectations")
            return {assertion, expectations_ok_, std::to_string(report_.errors.size()) + " step errors"};
        if (assertion == "tamper_detected")
            return {assertion, tamper_ok_.value_or(false), tamper_ok_ ? "every sampled flip detected" : "not run"};
        if (what == "receipts" && parts.size() == 2) {
            const auto want = static_cast<std::size_t>(to_int(parts[1], "receipt count"));
            return {assertion, log.size() == want, "log holds " + std::to_string(log.size())};
        }
        if (what == "balance" && parts.size() == 4) {
            const auto got = balance(log, key(parts[1]).key_id, parts[2], str_->chain_policy());
            return {assertion, got == to_int(parts[3], "balance"), "balance is " + std::to_string(got)};
        }
        if (what == "acknowledged" && parts.size() == 2) {
            const bool ack = str_->ack_status(receipt(parts[1])) == AckStatus::acknowledged;
            return {assertion, ack, ack ? "acknowledged" : "pending"};
        }
        fail(Errc::script_invalid, "unknown assertion " + assertion);
    }

    RunReport finish()
    {
        const auto log = str_->log_snapshot();
        report_.receipts_committed = log.size();
        report_.head_digest = log.head_digest().hex();
        report_.log_text = log.serialize();
        for (const auto& [name, store] : stores_) report_.store_digests[name] = store.digest().hex();
        for (const auto& a : sc_.assertions) report_.properties.push_back(evaluate(a, log));
        return report_;
    }

    struct Delivery {
        AgentId to;
        std::string bytes;
    };

    const Scenario& sc_;
    std::shared_ptr<ManualClock> clock_;
    StrConfig config_;
    std::vector<std::shared_ptr<Validator>> validators_;
    std::unique_ptr<SharedTransactionRepository> str_;
    std::map<std::string, KeyPair> keys_;
    std::map<AgentId, std::string> names_;
    std::map<std::string, PartyStore> stores_;
    std::deque<Delivery> queue_;
    bool drop_next_ = false;
    bool duplicate_next_ = false;
    std::string disk_;
    std::vector<SignedReceipt> committed_;
    std::map<std::string, TransactionDraft> drafts_;
    std::map<std::string, Digest> receipts_;
    std::vector<std::string> delivery_faults_;
    bool conservation_ok_ = true;
    bool expectations_ok_ = true;
    std::optional<bool> tamper_ok_;
    RunReport report_;
};

} // namespace

bool RunReport::all_passed() const
{
    return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed; });
}

RunReport run(const Scenario& scenario)
{
    return Simulation(scenario).run();
}

Scenario with_fault(Scenario scenario, std::size_t at, const std::string& fault)
{
    if (!is_fault(fault)) fail(Errc::script_invalid, "not a fault: " + fault);
    at = std::min(at, scenario.script.size());
    scenario.script.insert(scenario.script.begin() + static_cast<std::ptrdiff_t>(at), ScenarioStep{fault, {}});
    return scenario;
}

// --- builtin scenarios -------------------------------------------------------

namespace {

constexpr Timestamp march_2019 = 1551398400; // 2019-03-01T00:00:00Z

Scenario make(std::string name, Mode mode, std::vector<std::string> parties, std::vector<std::string> script,
              std::vector<std::string> assertions)
{
    Scenario s;
    s.name = std::move(name);
    s.seed = 7;
    s.mode = mode;
    s.start = march_2019;
    s.parties = std::move(parties);
    s.validators = {"notary"};
    for (const auto& line : script) s.script.push_back(ScenarioStep::parse(line));
    s.assertions = std::move(assertions);
    return s;
}

std::vector<std::string> bicycle_script()
{
    return {
        "offer draft=buy1 by=alice from=alice to=bob resource=USD qty=7000 take_resource=bicycle take_qty=1",
        "accept draft=buy1 by=bob",
        "validate draft=buy1",
        "advance_clock secs=2678400",
        "offer draft=buy2 by=alice from=alice to=bob resource=USD qty=8000 take_resource=bicycle take_qty=1",
        "accept draft=buy2 by=bob",
        "validate draft=buy2",
        "advance_clock secs=24969600",
        "offer draft=sell1 by=alice from=alice to=charlie resource=bicycle qty=1 take_resource=USD take_qty=10000",
        "accept draft=sell1 by=charlie",
        "validate draft=sell1",
        "stub party=alice draft=sell1 text=sold-to-charlie",
    };
}

} // namespace

std::vector<Scenario> builtin_scenarios()
{
    std::vector<Scenario> out;
    const std::vector<std::string> trio{"alice", "bob", "charlie"};

    out.push_back(make("bicycle", Mode::joint_suite, trio, bicycle_script(),
                       {"receipts:3", "balance:alice:USD:-5000", "balance:alice:bicycle:1", "balance:bob:USD:15000",
                        "wysiwis", "dominance", "chain_valid", "expectations"}));

    out.push_back(make("cheque", Mode::digital_cheque, trio,
                       {
                           "offer draft=c1 by=alice from=alice to=bob resource=USD qty=2500",
                           "validate draft=c1 expect=MissingReceiverSignature",
                           "accept draft=c1 by=charlie expect=NotAParty",
                           "accept draft=c1 by=bob",
                           "validate draft=c1",
                           "validate draft=c1 expect=WrongState",
                           "open draft=c2 from=bob to=charlie resource=USD qty=1000",
                           "accept draft=c2 by=charlie expect=WrongState",
                           "offer draft=c2 by=bob",
                           "accept draft=c2 by=charlie",
                           "validate draft=c2",
                           "offer draft=c3 by=charlie from=charlie to=alice resource=USD qty=10",
                           "advance_clock secs=90000",
                           "accept draft=c3 by=alice expect=Expired",
                       },
                       {"receipts:2", "balance:bob:USD:1500", "balance:charlie:USD:1000", "wysiwis", "dominance",
                        "chain_valid", "expectations"}));

    out.push_back(make("cash", Mode::digital_cash, trio,
                       {
                           "mint label=m1 by=notary amount=5000",
                           "spend label=s1 by=notary inputs=m1:0 to=alice:100",
                           "spend label=s2 by=alice inputs=s1:0 to=bob:60 fee=2",
                           "spend label=s3 by=alice inputs=s1:0 to=charlie:10 expect=DoubleSpend",
                           "spend label=s4 by=bob inputs=s2:0 to=charlie:61 expect=InsufficientInput",
                           "spend label=s5 by=charlie inputs=s2:1 to=bob:1 expect=NotOwner",
                           "spend label=s6 by=alice inputs=s2:1 to=charlie:38",
                       },
                       {"receipts:4", "balance:bob:COIN:60", "balance:charlie:COIN:38",
                        "acknowledged:s1", "conservation", "wysiwis", "dominance", "chain_valid", "expectations"}));

    out.push_back(make("coinbase", Mode::digital_cash, trio,
                       {
                           "mint label=m1 by=notary amount=1000",
                           "mint label=bad by=alice amount=1000 expect=NotValidator",
                           "spend label=s1 by=notary inputs=m1:0 to=bob:400 fee=5",
                           "mint label=m2 by=notary amount=1000 fees=6 expect=InsufficientInput",
                           "mint label=m2 by=notary amount=1000 fees=5",
                           "spend label=s2 by=bob inputs=s1:0 to=charlie:400",
                           "spend label=s3 by=charlie inputs=s2:0 to=alice:150",
                       },
                       {"receipts:5", "acknowledged:m1", "acknowledged:s1", "acknowledged:s2", "conservation",
                        "balance:alice:COIN:150", "wysiwis", "dominance", "chain_valid", "expectations"}));

    auto crash = bicycle_script();
    crash.insert(crash.begin() + 3, "crash_str");
    crash.insert(crash.begin() + 8, "drop_next");
    crash.insert(crash.begin() + 12, "duplicate_next");
    crash.push_back("crash_str");
    out.push_back(make("crash_recovery", Mode::joint_suite, trio, crash,
                       {"receipts:3", "balance:alice:USD:-5000", "wysiwis", "dominance", "chain_valid",
                        "expectations"}));

    auto tamper = bicycle_script();
    tamper.push_back("tamper_check samples=24");
    out.push_back(make("tamper_detection", Mode::joint_suite, trio, tamper,
                       {"receipts:3", "tamper_detected", "chain_valid"}));

    auto neutral = make("neutral_storage", Mode::digital_cheque, {"alice", "bob"},
                        {
                            "offer draft=c1 by=alice from=alice to=bob resource=USD qty=300",
                            "accept draft=c1 by=bob",
                            "validate draft=c1",
                        },
                        {"receipts:1", "balance:bob:USD:300", "wysiwis", "chain_valid", "expectations"});
    neutral.server_signs = false;
    out.push_back(std::move(neutral));

    auto quorum = make("quorum", Mode::joint_suite, {"alice", "bob"},
                       {
                           "offer draft=x1 by=bob from=bob to=alice resource=bond qty=2 take_resource=USD take_qty=200",
                           "accept draft=x1 by=alice",
                           "validate draft=x1",
                       },
                       {"receipts:1", "wysiwis", "chain_valid", "expectations"});
    quorum.validators = {"v1", "v2", "v3"};
    quorum.quorum = 2;
    out.push_back(std::move(quorum));
    return out;
}

std::optional<Scenario> find_builtin(std::string_view name)
{
    for (auto& s : builtin_scenarios())
        if (s.name == name) return s;
    return std::nullopt;
}

// --- reports -----------------------------------------------------------------

std::string format_report_text(const RunReport& r)
{
    std::ostringstream out;
    out << "scenario " << r.scenario << " (seed " << r.seed << ")\n";
    out << "receipts committed: " << r.receipts_committed << "\n";
    out << "log head: " << r.head_digest << "\n";
    out << "step errors:\n";
    if (r.errors.empty()) out << "  none\n";
    for (const auto& e : r.errors)
        out << "  #" << e.step << " " << e.verb << ": " << errc_name(e.code) << (e.expected ? " (expected)" : "")
            << "\n";
    out << "party stores:\n";
    for (const auto& [name, digest] : r.store_digests) out << "  " << name << " " << digest << "\n";
    out << "properties:\n";
    for (const auto& p : r.properties)
        out << "  " << (p.passed ? "PASS " : "FAIL ") << p.name << " - " << p.detail << "\n";
    out << (r.all_passed() ? "result: PASS\n" : "result: FAIL\n");
    return out.str();
}

std::string format_report_json(const RunReport& r)
{
    nlohmann::ordered_json j;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed;
    j["receipts_committed"] = r.receipts_committed;
    j["head_digest"] = r.head_digest;
    j["errors"] = nlohmann::ordered_json::array();
    for (const auto& e : r.errors)
        j["errors"].push_back({{"step", e.step}, {"verb", e.verb}, {"code", errc_name(e.code)}, {"expected", e.expected}});
    j["store_digests"] = r.store_digests;
    j["properties"] = nlohmann::ordered_json::array();
    for (const auto& p : r.properties)
        j["properties"].push_back({{"name", p.name}, {"passed", p.passed}, {"detail", p.detail}});
    j["passed"] = r.all_passed();
    return j.dump(2) + "\n";
}

} // namespace tea
