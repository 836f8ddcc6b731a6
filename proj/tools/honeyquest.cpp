// honeyquest: serve the questionnaire, build deceptive queries, lint the
// store, and analyze answer logs.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "honeyquest/answer_log.hpp"
#include "honeyquest/injection.hpp"
#include "honeyquest/query_file.hpp"
#include "honeyquest/report.hpp"
#include "honeyquest/rng.hpp"
#include "honeyquest/service.hpp"
#include "honeyquest/store.hpp"

namespace fs = std::filesystem;
using namespace honeyquest;

namespace {

fs::path default_techniques(const fs::path& store, const std::string& flag) {
    if (!flag.empty()) return flag;
    return store.parent_path() / "techniques";
}

int lint(const fs::path& store_dir, const fs::path& techniques) {
    const auto catalog = load_catalog(techniques);
    const auto risks = load_risk_catalog(store_dir / "risks.tsv");
    const QueryStore store = load_store(store_dir, catalog, risks);
    std::cout << "type\tlabel\tcount\n";
    for (const StoreSummaryRow& r : summarize(store))
        std::cout << to_string(r.type) << '\t' << to_string(r.label) << '\t' << r.count << '\n';
    std::cout << "# techniques " << catalog.size() << ", risks " << risks.size() << ", tutorial "
              << store.tutorial().size() << ", warmup " << store.warmup().size() << ", main " << store.main().size()
              << ", injection records " << store.records().size() << '\n';
    return 0;
}

PlacementPolicy parse_placement(const std::string& text, std::uint64_t seed) {
    if (text.rfind("fixed:", 0) == 0) return PlacementPolicy::fixed(std::stoi(text.substr(6)));
    switch (parse_placement_mode(text)) {
        case PlacementPolicy::Mode::append: return PlacementPolicy::append();
        case PlacementPolicy::Mode::random_interior: return PlacementPolicy::random_interior(seed);
        case PlacementPolicy::Mode::fixed: break;
    }
    throw Error(ErrorCode::invalid_argument, "fixed placement needs an index, e.g. fixed:3");
}

struct PlanLine {
    std::string source;
    std::string technique;  // "random" picks one with the seed
    std::string placement;
};

std::vector<PlanLine> read_plan(const fs::path& file) {
    std::istringstream in(read_file(file));
    std::vector<PlanLine> out;
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        PlanLine p;
        if (!(fields >> p.source >> p.technique))
            throw Error(ErrorCode::invalid_argument, "expected 'source technique [placement]'", line_no, 1)
                .with_path(file.string());
        if (!(fields >> p.placement)) p.placement = "random-interior";
        out.push_back(std::move(p));
    }
    return out;
}

int inject(const fs::path& store_dir, const fs::path& techniques, std::uint64_t seed, fs::path out_dir,
           const std::string& plan_file) {
    const auto catalog = load_catalog(techniques);
    const QueryStore store = load_store(store_dir, catalog, load_risk_catalog(store_dir / "risks.tsv"));
    if (out_dir.empty()) out_dir = store_dir / "queries";
    fs::create_directories(out_dir);

    std::vector<PlanLine> plan;
    if (!plan_file.empty()) {
        plan = read_plan(plan_file);
    } else {
        for (const std::string& id : store.main()) {
            const Query& q = store.at(id);
            if (q.label != QueryLabel::deceptive) plan.push_back({id, "random", "random-interior"});
        }
    }
    for (const PlanLine& p : plan) {
        const Query& q = store.at(p.source);
        const std::uint64_t line_seed = splitmix64(seed + fnv1a64(p.source));
        const TechniqueSpec* t = p.technique == "random" ? &choose_technique(q, catalog, line_seed)
                                                         : find_technique(catalog, p.technique);
        if (!t) throw Error(ErrorCode::dangling_reference, "unknown technique '" + p.technique + "'");
        auto [derived, record] = make_deceptive(q, *t, parse_placement(p.placement, line_seed));
        write_file(out_dir / (derived.id + ".query"), serialize_query(derived));
        write_file(out_dir / (derived.id + ".injection.json"), serialize_record(record));
        std::cout << derived.id << '\n';
    }
    return 0;
}

int serve(const fs::path& store_dir, const fs::path& techniques, const fs::path& log_file,
          const std::string& listen, std::uint64_t seed, const std::string& ui) {
    const QueryStore store = load_store(store_dir, techniques);
    const auto records = read_log(log_file);
    AnswerLog log(log_file);
    Questionnaire live(store, seed, &log);
    live.replay(records);

    Service service(store, live, ServiceOptions{seed, {}, {}});
    httplib::Server server;
    std::optional<fs::path> ui_dir;
    if (!ui.empty()) ui_dir = ui;
    service.mount(server, ui_dir);

    const auto colon = listen.rfind(':');
    const std::string host = colon == std::string::npos ? "127.0.0.1" : listen.substr(0, colon);
    const int port = std::stoi(colon == std::string::npos ? listen : listen.substr(colon + 1));
    std::cerr << "honeyquest: " << store.questionnaire_size() << " queries, " << live.users().size()
              << " participants replayed, listening on " << host << ':' << port << '\n';
    if (!server.listen(host, port)) {
        std::cerr << "honeyquest: cannot listen on " << listen << '\n';
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Honeyquest: measure how enticing deception techniques are"};
    app.require_subcommand(1);

    std::string store_dir, techniques;

    auto* lint_cmd = app.add_subcommand("lint", "Load and validate a query store");
    lint_cmd->add_option("--store", store_dir, "Store directory")->required();
    lint_cmd->add_option("--techniques", techniques, "HoneYAML directory (default: <store>/../techniques)");

    std::uint64_t seed = 0;
    std::string out_dir, plan;
    auto* inject_cmd = app.add_subcommand("inject", "Derive deceptive queries and injection records");
    inject_cmd->add_option("--store", store_dir, "Store directory")->required();
    inject_cmd->add_option("--techniques", techniques, "HoneYAML directory");
    inject_cmd->add_option("--seed", seed, "Seed for technique choice and placement");
    inject_cmd->add_option("--out", out_dir, "Output directory (default: <store>/queries)");
    inject_cmd->add_option("--plan", plan, "Lines of 'source technique|random [append|random-interior|fixed:N]'");

    std::string log_file, listen, ui;
    auto* serve_cmd = app.add_subcommand("serve", "Run the questionnaire service");
    serve_cmd->add_option("--store", store_dir, "Store directory")->envname("HONEYQUEST_STORE")->required();
    serve_cmd->add_option("--techniques", techniques, "HoneYAML directory")->envname("HONEYQUEST_TECHNIQUES");
    serve_cmd->add_option("--log", log_file, "Answer log")->envname("HONEYQUEST_LOG")->required();
    serve_cmd->add_option("--listen", listen, "host:port")->envname("HONEYQUEST_LISTEN")->default_val("127.0.0.1:8080");
    serve_cmd->add_option("--seed", seed, "Seed for per-user sequences and public ids")->envname("HONEYQUEST_SEED");
    serve_cmd->add_option("--ui", ui, "Static UI directory served at /")->envname("HONEYQUEST_UI");

    std::string report, answers, group_by = "technique", format = "tsv", by = "exploit";
    int min_samples = 10;
    double alpha = 0.05;
    bool include_warmup = false;
    std::size_t top = 0, min_main = 8;
    auto* analyze_cmd = app.add_subcommand("analyze", "Compute a report from an answer log");
    analyze_cmd->add_option("report", report, "counts|confusion|b1|b2|lines|reward")
        ->required()
        ->check(CLI::IsMember({"counts", "confusion", "b1", "b2", "lines", "reward"}));
    analyze_cmd->add_option("--store", store_dir, "Store directory")->required();
    analyze_cmd->add_option("--techniques", techniques, "HoneYAML directory");
    analyze_cmd->add_option("--answers", answers, "Answer log")->required();
    analyze_cmd->add_option("--group-by", group_by, "technique|risk|query")
        ->check(CLI::IsMember({"technique", "risk", "query"}));
    analyze_cmd->add_option("--format", format, "tsv|json")->check(CLI::IsMember({"tsv", "json"}));
    analyze_cmd->add_option("--min-samples", min_samples, "Smallest d_B that gets a B1 test");
    analyze_cmd->add_option("--alpha", alpha, "Significance level for power");
    analyze_cmd->add_option("--seed", seed, "Accepted for interface stability; reports are deterministic");
    analyze_cmd->add_flag("--include-warmup", include_warmup, "Keep warmup answers");
    analyze_cmd->add_option("--top", top, "Rows of the lines report (0 = all)");
    analyze_cmd->add_option("--by", by, "Ranking column of the lines report")
        ->check(CLI::IsMember({"exploit", "trap"}));
    analyze_cmd->add_option("--min-main-answers", min_main, "Drop users with fewer main answers (0 = keep all)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*lint_cmd) return lint(store_dir, default_techniques(store_dir, techniques));
        if (*inject_cmd) return inject(store_dir, default_techniques(store_dir, techniques), seed, out_dir, plan);
        if (*serve_cmd)
            return serve(store_dir, default_techniques(store_dir, techniques), log_file, listen, seed, ui);
        if (*analyze_cmd) {
            const QueryStore store = load_store(store_dir, default_techniques(store_dir, techniques));
            ReportOptions o;
            o.grouping = parse_grouping(group_by);
            o.format = parse_format(format);
            o.min_samples = min_samples;
            o.alpha = alpha;
            o.top = top;
            o.by = parse_mark_kind(by);
            o.filter.include_warmup = include_warmup;
            o.filter.min_main_answers = min_main;
            std::cout << render_report(report, store, answers_in(read_log(answers)), o);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "honeyquest: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "honeyquest: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
