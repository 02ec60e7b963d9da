// tea: command-line front end over a file-backed repository directory.
//
//   <repo>/str.conf        repository configuration (canonical lines)
//   <repo>/validators/     validator key files
//   <repo>/receipts.log    committed receipts
//   <repo>/resources       resource catalog
//   <repo>/drafts/         open drafts, one file per draft id

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tea/accounting.hpp"
#include "tea/harness.hpp"
#include "tea/str.hpp"
#include "tea/views.hpp"

namespace fs = std::filesystem;
using namespace tea;

namespace {

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view content)
{
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(Errc::io_error, "cannot write " + path.string());
        out << content;
        if (!out.flush()) fail(Errc::io_error, "short write to " + path.string());
    }
    fs::rename(tmp, path);
}

struct RepoConfig {
    StrConfig str;
    std::size_t validators = 1;
};

void encode_fields(CanonicalWriter& w, const RepoConfig& c)
{
    w.token("mode", to_string(c.str.mode))
        .boolean("server_signs", c.str.server_signs)
        .unsigned_integer("quorum", c.str.quorum)
        .integer("draft_ttl", c.str.draft_ttl)
        .token("cash_resource", c.str.cash_resource)
        .unsigned_integer("validators", c.validators);
}

RepoConfig decode_fields(CanonicalReader& r, std::type_identity<RepoConfig>)
{
    RepoConfig c;
    c.str.mode = parse_mode(r.token("mode"));
    c.str.server_signs = r.boolean("server_signs");
    c.str.quorum = r.unsigned_integer("quorum");
    c.str.draft_ttl = r.integer("draft_ttl");
    c.str.cash_resource = r.token("cash_resource");
    c.validators = r.unsigned_integer("validators");
    return c;
}

class Repo {
public:
    Repo(fs::path dir, std::optional<Timestamp> now) : dir_(std::move(dir))
    {
        if (!fs::exists(dir_ / "str.conf")) fail(Errc::io_error, dir_.string() + " is not a repository (run init)");
        config_ = canonical_decode<RepoConfig>(read_file(dir_ / "str.conf"));
        if (now)
            clock_ = std::make_shared<ManualClock>(*now);
        else
            clock_ = std::make_shared<SystemClock>();
        for (std::size_t i = 0; i < config_.validators; ++i) {
            auto key = read_key_file(validator_path(dir_, i));
            validator_keys_.push_back(key);
            validators_.push_back(std::make_shared<NotaryValidator>(std::move(key)));
        }
        auto log = fs::exists(log_path()) ? ReceiptLog::parse(read_file(log_path())) : ReceiptLog{};
        str_ = std::make_unique<SharedTransactionRepository>(config_.str, validators_, clock_, std::move(log));
    }

    static fs::path validator_path(const fs::path& dir, std::size_t i)
    {
        return dir / "validators" / ("v" + std::to_string(i) + ".key");
    }

    SharedTransactionRepository& str() { return *str_; }
    Timestamp now() const { return clock_->now(); }
    const KeyPair& validator_key(std::size_t i) const
    {
        if (i >= validator_keys_.size()) fail(Errc::not_validator, "no validator #" + std::to_string(i));
        return validator_keys_[i];
    }

    fs::path log_path() const { return dir_ / "receipts.log"; }
    fs::path draft_path(const std::string& id) const { return dir_ / "drafts" / (id + ".draft"); }

    ResourceCatalog catalog() const
    {
        const auto p = dir_ / "resources";
        return fs::exists(p) ? ResourceCatalog::parse(read_file(p)) : ResourceCatalog{};
    }
    void save_catalog(const ResourceCatalog& c) const { write_file(dir_ / "resources", c.serialize()); }

    void save_draft(const TransactionDraft& d) const { write_file(draft_path(d.draft_id()), canonical_encode(d)); }
    TransactionDraft load_draft(const std::string& id) const
    {
        if (!is_lower_hex(id)) fail(Errc::decode_error, "draft ids are lowercase hex");
        return canonical_decode<TransactionDraft>(read_file(draft_path(id)));
    }
    void drop_draft(const std::string& id) const { fs::remove(draft_path(id)); }

    void save_log() { write_file(log_path(), str_->log_snapshot().serialize()); }

private:
    fs::path dir_;
    RepoConfig config_;
    std::vector<KeyPair> validator_keys_;
    std::vector<std::shared_ptr<Validator>> validators_;
    std::shared_ptr<Clock> clock_;
    std::unique_ptr<SharedTransactionRepository> str_;
};

/// An agent argument is either a key id or a path to a key file.
AgentId agent_arg(const std::string& text)
{
    if (text.size() == 64 && is_lower_hex(text)) return text;
    return read_key_file(text).key_id;
}

ReceiptLog load_verified(const fs::path& path, ChainPolicy policy = {})
{
    const auto text = fs::exists(path) ? read_file(path) : std::string{};
    const auto report = verify_chain_text(text, policy);
    if (!report.ok) fail(Errc::chain_broken, "seq " + std::to_string(*report.first_bad_seq) + ": " + report.reason);
    return ReceiptLog::parse(text);
}

void print_receipt(const SignedReceipt& r)
{
    std::cout << "receipt " << r.receipt_id.hex() << " seq " << r.seq << "\n";
}

std::pair<std::string, std::string> split_pair(const std::string& text, std::string_view what)
{
    const auto colon = text.rfind(':');
    if (colon == std::string::npos) fail(Errc::decode_error, std::string(what) + " must look like a:b, got " + text);
    return {text.substr(0, colon), text.substr(colon + 1)};
}

std::int64_t parse_int(const std::string& text)
{
    std::size_t used = 0;
    const auto v = std::stoll(text, &used);
    if (used != text.size()) fail(Errc::decode_error, "not an integer: " + text);
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Triple-entry accounting toolkit"};
    app.require_subcommand(1);
    std::string repo_dir = ".";
    std::optional<Timestamp> now;
    app.add_option("--repo", repo_dir, "Repository directory");
    app.add_option("--now", now, "Override the clock (UTC seconds)");
    auto open_repo = [&] { return Repo(repo_dir, now); };

    // init
    auto* init = app.add_subcommand("init", "Create a repository");
    std::string mode_text = "joint_suite";
    std::size_t n_validators = 1, quorum = 1;
    bool neutral = false;
    std::int64_t ttl = 86400;
    std::string cash_resource = "COIN";
    std::optional<std::uint64_t> init_seed;
    init->add_option("--mode", mode_text, "joint_suite | digital_cheque | digital_cash");
    init->add_option("--validators", n_validators)->check(CLI::PositiveNumber);
    init->add_option("--quorum", quorum);
    init->add_flag("--neutral", neutral, "Neutral storage: no validator countersignature");
    init->add_option("--ttl", ttl, "Draft lifetime in seconds");
    init->add_option("--cash-resource", cash_resource);
    init->add_option("--seed", init_seed, "Derive validator keys deterministically");
    init->callback([&] {
        const fs::path dir = repo_dir;
        if (fs::exists(dir / "str.conf")) fail(Errc::io_error, "repository already exists at " + dir.string());
        fs::create_directories(dir / "validators");
        fs::create_directories(dir / "drafts");
        RepoConfig c;
        c.str.mode = parse_mode(mode_text);
        c.str.server_signs = !neutral;
        c.str.quorum = quorum;
        c.str.draft_ttl = ttl;
        c.str.cash_resource = cash_resource;
        c.validators = n_validators;
        for (std::size_t i = 0; i < n_validators; ++i) {
            const auto key = init_seed ? derive_keypair(*init_seed, "validator:" + std::to_string(i)) : generate_keypair();
            write_key_file(Repo::validator_path(dir, i), key);
            std::cout << "validator " << i << " " << key.key_id << "\n";
        }
        write_file(dir / "str.conf", canonical_encode(c));
        write_file(dir / "receipts.log", "");
    });

    // keygen
    auto* keygen = app.add_subcommand("keygen", "Generate an Ed25519 key file");
    std::string key_out;
    std::optional<std::uint64_t> key_seed;
    std::string key_label = "key";
    keygen->add_option("--out", key_out)->required();
    keygen->add_option("--seed", key_seed, "Deterministic key from seed and label");
    keygen->add_option("--label", key_label);
    keygen->callback([&] {
        const auto key = key_seed ? derive_keypair(*key_seed, key_label) : generate_keypair();
        write_key_file(key_out, key);
        std::cout << key.key_id << "\n";
    });

    // contract-hash
    auto* chash = app.add_subcommand("contract-hash", "Digest of a contract text");
    std::string contract_file;
    chash->add_option("file", contract_file)->required();
    chash->callback([&] { std::cout << ricardian_digest(read_file(contract_file)).digest.hex() << "\n"; });

    // resource
    auto* resource = app.add_subcommand("resource", "Register a resource in the catalog");
    std::string res_id, res_kind = "currency", res_unit = "unit", res_contract;
    resource->add_option("--id", res_id)->required();
    resource->add_option("--kind", res_kind, "currency | good | instrument");
    resource->add_option("--unit", res_unit);
    resource->add_option("--contract", res_contract, "Contract file for instruments");
    resource->callback([&] {
        auto repo = open_repo();
        Resource r;
        r.resource_id = res_id;
        r.kind = parse_resource_kind(res_kind);
        r.unit = res_unit;
        if (!res_contract.empty()) r.contract_digest = ricardian_digest(read_file(res_contract)).digest;
        auto catalog = repo.catalog();
        catalog.add(r);
        repo.save_catalog(catalog);
    });

    // offer
    auto* offer = app.add_subcommand("offer", "Draft and sign an entry");
    std::string o_key, o_resource, o_from, o_to, o_take_resource, o_event = "e";
    Amount o_qty = 0, o_take_qty = 0;
    offer->add_option("--key", o_key)->required();
    offer->add_option("--resource", o_resource)->required();
    offer->add_option("--qty", o_qty)->required();
    offer->add_option("--from", o_from)->required();
    offer->add_option("--to", o_to)->required();
    offer->add_option("--take-resource", o_take_resource);
    offer->add_option("--take-qty", o_take_qty);
    offer->add_option("--contract", contract_file, "Contract the resource must reference");
    offer->add_option("--event-id", o_event, "Event id prefix");
    offer->callback([&] {
        auto repo = open_repo();
        const auto key = read_key_file(o_key);
        if (!contract_file.empty()) {
            const auto* res = repo.catalog().find(o_resource);
            const auto digest = ricardian_digest(read_file(contract_file)).digest;
            if (!res || res->contract_digest != digest)
                fail(Errc::invariant_violation, "resource " + o_resource + " does not reference this contract");
        }
        EconomicEvent give{o_event + ".give", o_resource, o_qty, agent_arg(o_from), agent_arg(o_to), repo.now(), {}};
        auto& str = repo.str();
        SharedEntry entry;
        if (o_take_resource.empty()) {
            entry = make_payment(give);
        } else {
            EconomicEvent take{o_event + ".take", o_take_resource, o_take_qty, give.to_agent, give.from_agent,
                               give.occurred_at, {}};
            entry = make_exchange(give, take);
        }
        const auto draft = str.offer(std::move(entry), key);
        repo.save_draft(draft);
        std::cout << draft.draft_id() << "\n";
    });

    // accept / reject / validate
    std::string draft_id, a_key;
    auto* accept = app.add_subcommand("accept", "Countersign an offered draft");
    accept->add_option("--draft", draft_id)->required();
    accept->add_option("--key", a_key)->required();
    accept->callback([&] {
        auto repo = open_repo();
        repo.save_draft(repo.str().accept(repo.load_draft(draft_id), read_key_file(a_key)));
    });
    auto* reject = app.add_subcommand("reject", "Abandon a draft");
    reject->add_option("--draft", draft_id)->required();
    reject->callback([&] {
        auto repo = open_repo();
        repo.str().reject(repo.load_draft(draft_id));
        repo.drop_draft(draft_id);
    });
    auto* validate = app.add_subcommand("validate", "Validate a draft and commit its receipt");
    validate->add_option("--draft", draft_id)->required();
    validate->callback([&] {
        auto repo = open_repo();
        const auto r = repo.str().validate(repo.load_draft(draft_id));
        repo.save_log();
        repo.drop_draft(draft_id);
        print_receipt(r);
    });

    // str-verify
    auto* verify = app.add_subcommand("str-verify", "Verify a receipt log");
    std::string verify_file;
    std::size_t min_sigs = 0;
    verify->add_option("logfile", verify_file)->required();
    verify->add_option("--min-validator-sigs", min_sigs);
    verify->callback([&] {
        const auto text = read_file(verify_file);
        const auto report = verify_chain_text(text, ChainPolicy{{}, min_sigs});
        if (!report.ok) {
            std::cout << "FAIL seq " << *report.first_bad_seq << ": " << report.reason << "\n";
            throw CLI::RuntimeError(1);
        }
        std::cout << "ok " << split_blocks(text).size() << " receipts\n";
    });

    // spend
    auto* spend = app.add_subcommand("spend", "Spend cash outputs");
    std::string s_key, s_event = "spend";
    std::vector<std::string> s_inputs, s_outputs;
    Amount s_fee = 0;
    spend->add_option("--key", s_key)->required();
    spend->add_option("--input", s_inputs, "<receipt hex>:<index>")->required();
    spend->add_option("--to", s_outputs, "<agent>:<amount>")->required();
    spend->add_option("--fee", s_fee);
    spend->add_option("--event-id", s_event);
    spend->callback([&] {
        auto repo = open_repo();
        const auto key = read_key_file(s_key);
        CashTransaction tx;
        for (const auto& in : s_inputs) tx.inputs.push_back(parse_outpoint(in));
        for (const auto& out : s_outputs) {
            const auto [agent, amount] = split_pair(out, "--to");
            tx.outputs.push_back({agent_arg(agent), parse_int(amount)});
        }
        tx.fee = s_fee;
        auto& str = repo.str();
        auto entry = make_cash_entry(key.key_id, tx, str.config().cash_resource, s_event, repo.now());
        const auto r = str.validate(str.offer(std::move(entry), key, tx));
        repo.save_log();
        print_receipt(r);
        if (r.change) std::cout << "change " << *r.change << "\n";
    });

    // mint
    auto* mint = app.add_subcommand("mint", "Mint a coinbase to a validator");
    Amount m_amount = 0, m_fees = 0;
    std::size_t m_validator = 0;
    mint->add_option("--amount", m_amount)->required();
    mint->add_option("--fees", m_fees, "Collected fees to recycle");
    mint->add_option("--validator", m_validator, "Validator index");
    mint->callback([&] {
        auto repo = open_repo();
        const auto r = repo.str().mint_coinbase(repo.validator_key(m_validator), m_amount, m_fees);
        repo.save_log();
        print_receipt(r);
    });

    // views
    std::string party, v_resource;
    auto* view = app.add_subcommand("view", "A party's ledger view");
    view->add_option("--party", party)->required();
    view->callback([&] {
        auto repo = open_repo();
        const auto v = project(repo.str().log_snapshot(), agent_arg(party));
        std::cout << "receipt_id,direction,resource_id,quantity,counterparty,occurred_at,purpose\n";
        for (const auto& row : v.rows)
            std::cout << row.receipt_id.hex() << "," << to_string(row.direction) << "," << row.resource_id << ","
                      << row.quantity << "," << row.counterparty << "," << row.occurred_at << "," << row.purpose
                      << "\n";
    });
    auto* bal = app.add_subcommand("balance", "Net balance of one resource");
    bal->add_option("--party", party)->required();
    bal->add_option("--resource", v_resource)->required();
    bal->callback([&] {
        auto repo = open_repo();
        std::cout << balance(repo.str().log_snapshot(), agent_arg(party), v_resource) << "\n";
    });
    auto* piv = app.add_subcommand("pivot", "Grouped totals over the whole log");
    std::string dims_text;
    piv->add_option("--dims", dims_text, "Comma-separated: party,resource,period,purpose");
    piv->callback([&] {
        auto repo = open_repo();
        const auto dims = parse_dims(dims_text);
        for (std::size_t i = 0; i < dims.size(); ++i) std::cout << to_string(dims[i]) << ",";
        std::cout << "total\n";
        for (const auto& cell : pivot(repo.str().log_snapshot(), dims)) {
            for (const auto& k : cell.keys) std::cout << k << ",";
            std::cout << cell.total << "\n";
        }
    });

    // accounting
    std::string method_text = "avco", journal_out;
    auto* journal = app.add_subcommand("export-journal", "Double-entry journal for a party");
    journal->add_option("--party", party)->required();
    journal->add_option("--out", journal_out)->required();
    journal->add_option("--method", method_text, "Cost method for goods outflows");
    journal->callback([&] {
        auto repo = open_repo();
        const auto catalog = repo.catalog();
        const auto v = project(repo.str().log_snapshot(), agent_arg(party));
        const auto replay = replay_inventory(v, catalog, parse_cost_method(method_text));
        const CostLookup cost = [&](const ViewRow& row) -> std::optional<Amount> {
            const auto it = replay.cogs_by_receipt.find(row.receipt_id);
            return it == replay.cogs_by_receipt.end() ? std::nullopt : std::optional<Amount>(it->second);
        };
        const auto entries = export_double_entry(v, catalog, cost);
        write_file(journal_out, journal_csv(entries));
        std::cout << entries.size() << " journal entries\n";
    });
    auto* profit = app.add_subcommand("profit", "Realised profit by cost method");
    std::string from_log, p_catalog;
    std::optional<std::string> p_resource;
    profit->add_option("--method", method_text)->required();
    profit->add_option("--from-log", from_log)->required();
    profit->add_option("--party", party)->required();
    profit->add_option("--resource", p_resource, "Replay just this resource");
    profit->add_option("--catalog", p_catalog, "Resource catalog file");
    profit->callback([&] {
        const auto log = load_verified(from_log);
        const auto catalog = p_catalog.empty() ? ResourceCatalog{} : ResourceCatalog::parse(read_file(p_catalog));
        const auto replay =
            replay_inventory(project(log, agent_arg(party)), catalog, parse_cost_method(method_text), p_resource);
        Amount total = 0;
        std::cout << "receipt_id,sale_price,cogs,profit\n";
        for (const auto& p : replay.profits) {
            std::cout << (p.receipt_id ? p.receipt_id->hex() : "") << "," << p.sale_price << "," << p.cogs << ","
                      << p.profit << "\n";
            total += p.profit;
        }
        std::cout << "total," << total << "\n";
    });
    auto* momentum = app.add_subcommand("momentum", "Momentum accounting report from a wealth series");
    std::string series_file;
    momentum->add_option("--series", series_file, "CSV of t,wealth")->required();
    momentum->callback([&] {
        const auto series = parse_wealth_csv(read_file(series_file));
        std::cout << format_report(momentum_report(series));
    });

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a harness scenario");
    std::string scenario_arg, report_out;
    std::optional<std::uint64_t> sim_seed;
    bool list = false;
    simulate->add_option("--scenario", scenario_arg, "Builtin name or scenario file");
    simulate->add_option("--seed", sim_seed);
    simulate->add_option("--report", report_out, "Write the text report here and a JSON summary beside it");
    simulate->add_flag("--list", list, "List builtin scenarios");
    bool dump = false;
    simulate->add_flag("--dump", dump, "Print the scenario in file form instead of running it");
    simulate->callback([&] {
        if (list || scenario_arg.empty()) {
            for (const auto& s : builtin_scenarios()) std::cout << s.name << "\n";
            return;
        }
        auto scenario = find_builtin(scenario_arg);
        if (!scenario) scenario = canonical_decode<Scenario>(read_file(scenario_arg));
        if (sim_seed) scenario->seed = *sim_seed;
        if (dump) {
            std::cout << canonical_encode(*scenario);
            return;
        }
        const auto report = run(*scenario);
        const auto text = format_report_text(report);
        std::cout << text;
        if (!report_out.empty()) {
            write_file(report_out, text);
            write_file(report_out + ".json", format_report_json(report));
        }
        if (!report.all_passed()) throw CLI::RuntimeError(1);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
