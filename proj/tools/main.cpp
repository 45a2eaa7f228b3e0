#include "schemabridge/core/errors.hpp"
#include "schemabridge/core/registry.hpp"
#include "schemabridge/eval/benchmark.hpp"
#include "schemabridge/eval/fixture.hpp"
#include "schemabridge/eval/report.hpp"
#include "schemabridge/llm/client.hpp"
#include "schemabridge/llm/live_backend.hpp"
#include "schemabridge/llm/mock_backend.hpp"
#include "schemabridge/llm/profile.hpp"
#include "schemabridge/llm/prompts.hpp"
#include "schemabridge/middleware/metrics.hpp"
#include "schemabridge/middleware/pipeline.hpp"
#include "schemabridge/middleware/proxy.hpp"
#include "schemabridge/middleware/server.hpp"
#include "schemabridge/resolve/cache.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

namespace sb = schemabridge;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

struct BackendOptions {
    std::string backend = "mock";
    std::string models_file = "data/models.json";
    std::string mock_mode = "faithful";
    std::string fault_kind = "garbled";
    double fault_rate = 0.5;
    std::uint64_t seed = 42;
    int mock_latency_ms = 0;
};

void add_backend_options(CLI::App& cmd, BackendOptions& o) {
    cmd.add_option("--backend", o.backend, "LLM backend")->check(CLI::IsMember({"mock", "live"}))->capture_default_str();
    cmd.add_option("--models", o.models_file, "Model profile file")->capture_default_str();
    cmd.add_option("--mock-mode", o.mock_mode, "Mock behaviour")
        ->check(CLI::IsMember({"faithful", "faulty", "outage"}))
        ->capture_default_str();
    cmd.add_option("--fault-kind", o.fault_kind, "Fault injected in faulty mode")
        ->check(CLI::IsMember({"drop_field", "garbled", "timeout"}))
        ->capture_default_str();
    cmd.add_option("--fault-rate", o.fault_rate, "Fault probability in faulty mode")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--seed", o.seed, "Mock fault seed")->capture_default_str();
    cmd.add_option("--mock-latency-ms", o.mock_latency_ms, "Simulated mock service time")->capture_default_str();
}

sb::MockMode mock_mode(const BackendOptions& o) {
    if (o.mock_mode == "outage") return sb::MockMode::outage();
    if (o.mock_mode == "faulty") return sb::MockMode::faulty(*sb::fault_kind_from_string(o.fault_kind), o.fault_rate);
    return sb::MockMode::faithful();
}

std::shared_ptr<sb::MockBackend> make_mock(const BackendOptions& o, const std::string& fixtures_dir) {
    auto mock = std::make_shared<sb::MockBackend>(mock_mode(o), o.seed);
    mock->load_fixtures(fixtures_dir);
    mock->set_latency(std::chrono::milliseconds(o.mock_latency_ms));
    return mock;
}

sb::ModelProfile resolve_profile(const BackendOptions& o, const std::string& name) {
    if (o.backend == "mock" && name == "mock") return sb::mock_profile();
    const auto profiles = sb::load_profiles_file(o.models_file);
    const auto* p = sb::find_profile(profiles, name);
    if (p == nullptr) throw sb::ConfigError("unknown model profile '" + name + "' in " + o.models_file);
    return *p;
}

std::vector<std::string> expand_models(const BackendOptions& o, const std::vector<std::string>& requested) {
    if (requested.size() != 1 || requested.front() != "all") return requested;
    std::vector<std::string> names;
    for (const auto& p : sb::load_profiles_file(o.models_file)) {
        if (p.provider != "mock") names.push_back(p.name);
    }
    return names;
}

std::pair<std::string, int> split_listen(const std::string& listen) {
    const auto colon = listen.rfind(':');
    if (colon == std::string::npos) throw sb::ConfigError("--listen expects host:port, got " + listen);
    return {listen.substr(0, colon), std::stoi(listen.substr(colon + 1))};
}

struct ServeOptions {
    std::string config = "data/weather/registry.json";
    std::string prompts = "data/prompts";
    std::string model = "mock";
    std::string metrics_out;
    std::string listen = "127.0.0.1:8080";
    std::string upstream;
    std::string cache_file;
    std::string fixtures = "data/scenarios";
    int ensemble_size = 3;
    int forward_timeout_s = 30;
};

int run_serve(const ServeOptions& s, const BackendOptions& b) {
    auto registry = std::make_shared<const sb::SchemaRegistry>(sb::load_registry_file(s.config));
    const auto profile = resolve_profile(b, s.model);
    std::shared_ptr<sb::LlmBackend> backend;
    if (b.backend == "mock") {
        backend = make_mock(b, s.fixtures);
    } else {
        backend = std::make_shared<sb::LiveBackend>(sb::endpoint_from_env(profile.provider));
    }
    auto client = std::make_shared<const sb::LlmClient>(backend, profile, sb::load_prompts(s.prompts));
    auto cache = std::make_shared<sb::MappingCache>();
    if (!s.cache_file.empty()) {
        const auto restored = cache->load(s.cache_file, *registry);
        std::cerr << "restored " << restored << " cached mapping(s) from " << s.cache_file << "\n";
    }
    auto pipeline = std::make_shared<const sb::Pipeline>(registry, client, cache, sb::PipelineOptions{s.ensemble_size});
    auto metrics = s.metrics_out.empty() ? std::make_shared<sb::MetricsSink>()
                                         : std::make_shared<sb::MetricsSink>(s.metrics_out);
    auto middleware = std::make_shared<const sb::Middleware>(
        pipeline, sb::http_forwarder(std::chrono::seconds(s.forward_timeout_s)), s.upstream, metrics);

    sb::ProxyServer server(middleware);
    const auto [host, port] = split_listen(s.listen);
    const int bound = server.bind(host, port);
    if (bound < 0) {
        std::cerr << "cannot listen on " << s.listen << "\n";
        return 1;
    }
    std::cerr << "listening on " << host << ":" << bound << " with " << registry->routes.size()
              << " route(s), model " << profile.name << "\n";

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::thread watcher([&server] {
        while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server.stop();
    });
    server.serve();
    g_stop.store(true);
    watcher.join();

    if (!s.cache_file.empty()) cache->save(s.cache_file);
    std::cerr << sb::to_json(metrics->counters()).dump() << "\n";
    return 0;
}

struct BenchOptions {
    std::string scenarios = "data/scenarios";
    std::string prompts = "data/prompts";
    std::string strategy = "both";
    std::string safeguards = "both";
    int runs = 3;
    std::vector<std::string> models{"mock"};
    std::string out = "report.json";
    std::string text_out;
    double epsilon = sb::kDefaultEpsilon;
    int ensemble_size = 3;
    bool parallel = false;
    bool quiet = false;
};

int run_bench(const BenchOptions& o, const BackendOptions& b) {
    const auto fixtures = sb::load_fixtures(o.scenarios);
    sb::BenchmarkConfig config;
    config.strategies.clear();
    if (o.strategy != "codegen") config.strategies.push_back(sb::Strategy::Direct);
    if (o.strategy != "direct") config.strategies.push_back(sb::Strategy::Codegen);
    config.safeguard_modes.clear();
    if (o.safeguards != "off") config.safeguard_modes.push_back(true);
    if (o.safeguards != "on") config.safeguard_modes.push_back(false);
    config.runs = o.runs;
    config.epsilon = o.epsilon;
    config.ensemble_size = o.ensemble_size;
    config.parallel = o.parallel;
    if (!o.quiet) {
        config.on_run = [](const sb::RunResult& r) {
            std::cerr << r.model << " #" << r.scenario_id << " " << sb::to_string(r.strategy)
                      << (r.safeguards ? " +sg" : " -sg") << " run " << r.run << ": " << (r.pass ? "pass" : "FAIL")
                      << (r.error.empty() ? "" : " (" + r.error + ")") << "\n";
        };
    }

    std::vector<sb::BenchmarkModel> models;
    for (const auto& name : expand_models(b, o.models)) {
        sb::BenchmarkModel m{resolve_profile(b, name), nullptr};
        if (b.backend == "mock") {
            m.backend = make_mock(b, o.scenarios);
        } else {
            m.backend = std::make_shared<sb::LiveBackend>(sb::endpoint_from_env(m.profile.provider));
        }
        models.push_back(std::move(m));
    }

    const auto report = sb::run_benchmark(config, fixtures, models, sb::load_prompts(o.prompts));
    const auto rendered = sb::render_report(report);
    std::cout << rendered.text;
    if (!o.out.empty()) {
        std::ofstream out(o.out);
        if (!out) throw sb::ConfigError("cannot write " + o.out);
        out << rendered.document.dump(2) << "\n";
    }
    if (!o.text_out.empty()) {
        std::ofstream out(o.text_out);
        if (!out) throw sb::ConfigError("cannot write " + o.text_out);
        out << rendered.text;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schema mismatch middleware with LLM-backed resolution"};
    app.require_subcommand(1);

    ServeOptions serve;
    BackendOptions serve_backend;
    auto* serve_cmd = app.add_subcommand("serve", "Run the intercepting proxy");
    serve_cmd->add_option("--config", serve.config, "Route registry file")->capture_default_str();
    serve_cmd->add_option("--prompts", serve.prompts, "Prompt directory")->capture_default_str();
    serve_cmd->add_option("--model", serve.model, "Model profile name")->capture_default_str();
    serve_cmd->add_option("--metrics-out", serve.metrics_out, "JSON-lines request log");
    serve_cmd->add_option("--listen", serve.listen, "host:port to listen on")->capture_default_str();
    serve_cmd->add_option("--upstream", serve.upstream, "Service for requests outside the registry");
    serve_cmd->add_option("--cache-file", serve.cache_file, "Mapping cache persisted across restarts");
    serve_cmd->add_option("--mock-fixtures", serve.fixtures, "Fixture directory for the mock backend")
        ->capture_default_str();
    serve_cmd->add_option("--ensemble-size", serve.ensemble_size, "Mapping generations per vote")
        ->check(CLI::Range(1, 15))
        ->capture_default_str();
    serve_cmd->add_option("--forward-timeout", serve.forward_timeout_s, "Upstream timeout in seconds")
        ->capture_default_str();
    add_backend_options(*serve_cmd, serve_backend);

    BenchOptions bench;
    BackendOptions bench_backend;
    auto* bench_cmd = app.add_subcommand("bench", "Run the scenario benchmark");
    bench_cmd->add_option("--scenarios", bench.scenarios, "Scenario fixture directory")->capture_default_str();
    bench_cmd->add_option("--prompts", bench.prompts, "Prompt directory")->capture_default_str();
    bench_cmd->add_option("--strategy", bench.strategy, "Strategies to run")
        ->check(CLI::IsMember({"direct", "codegen", "both"}))
        ->capture_default_str();
    bench_cmd->add_option("--safeguards", bench.safeguards, "Safeguard modes to run")
        ->check(CLI::IsMember({"on", "off", "both"}))
        ->capture_default_str();
    bench_cmd->add_option("--runs", bench.runs, "Runs per combination")->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_option("--model", bench.models, "Model profile name(s), or 'all'")->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "Report JSON file")->capture_default_str();
    bench_cmd->add_option("--text-out", bench.text_out, "Also write the text tables here");
    bench_cmd->add_option("--epsilon", bench.epsilon, "Float tolerance for pass@1")->capture_default_str();
    bench_cmd->add_option("--ensemble-size", bench.ensemble_size, "Mapping generations per vote")
        ->check(CLI::Range(1, 15))
        ->capture_default_str();
    bench_cmd->add_flag("--parallel", bench.parallel, "Run scenarios concurrently (offline backends)");
    bench_cmd->add_flag("--quiet", bench.quiet, "No per-run progress");
    add_backend_options(*bench_cmd, bench_backend);

    CLI11_PARSE(app, argc, argv);

    try {
        if (serve_cmd->parsed()) return run_serve(serve, serve_backend);
        return run_bench(bench, bench_backend);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
