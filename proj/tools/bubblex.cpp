#include <bubblex/bubblex.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using nlohmann::json;

struct Failure {
    int status;
    std::string message;
};

void check(int status) {
    if (status != BX_OK) throw Failure{status, bx_last_error_message()};
}

std::string fetch(const std::function<int(char*, size_t, size_t*)>& fn) {
    size_t need = 0;
    int st = fn(nullptr, 0, &need);
    if (st != BX_ERR_INSUFFICIENT_BUFFER) check(st);
    std::string out(need, '\0');
    check(fn(out.data(), out.size(), &need));
    out.resize(need - 1);
    return out;
}

int exit_code_for(int status) {
    switch (status) {
        case BX_ERR_PARSE:
        case BX_ERR_IO:
        case BX_ERR_INVALID_ARGUMENT:
        case BX_ERR_DEGENERATE_CELL:
        case BX_ERR_INCONSISTENT_DIM:
            return 2;
        case BX_ERR_NOT_A_DECOMPOSITION:
            return 3;
        default:
            return 1;
    }
}

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
    T** out() { return &p; }
    T* get() const { return p; }
};

using Mesh = Handle<bx_mesh, bx_mesh_free>;
using Weights = Handle<bx_weights, bx_weights_free>;
using Form = Handle<bx_form, bx_form_free>;
using Decomp = Handle<bx_decomposition, bx_decomposition_free>;
using Report = Handle<bx_report, bx_report_free>;

json report_json(const Report& r) {
    return json::parse(fetch([&](char* b, size_t c, size_t* n) { return bx_report_json(r.get(), b, c, n); }));
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{BX_ERR_IO, "IoError: cannot write " + path};
    out << text << '\n';
    if (!out) throw Failure{BX_ERR_IO, "IoError: write failed for " + path};
}

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Prints failing checks to stderr and returns whether all passed.
bool report_checks(const json& rep) {
    for (const auto& c : rep.at("checks"))
        if (!c.at("passed").get<bool>())
            std::cerr << "FAIL " << c.at("name").get<std::string>() << ": " << c.at("witness").get<std::string>() << '\n';
    return rep.at("all_passed").get<bool>();
}

struct Loaded {
    Mesh mesh;
    Weights ws;
    double weights_seconds = 0;
};

void load(Loaded& l, const std::string& mesh_path, bool weights) {
    check(bx_mesh_load(mesh_path.c_str(), l.mesh.out()));
    if (weights) {
        auto t0 = std::chrono::steady_clock::now();
        check(bx_weights_build(l.mesh.get(), l.ws.out()));
        l.weights_seconds = since(t0);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bubblex: exact bubble transform of piecewise polynomial differential forms"};
    app.require_subcommand(1);

    int jobs = 0;
    if (const char* env = std::getenv("BUBBLEX_JOBS")) jobs = std::atoi(env);
    app.add_option("--jobs", jobs, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.fallthrough();

    std::string mesh_path, form_path, out_path, level = "full";
    int k = 0, degree = 1, trials = 20, m = 0, points = 10;
    uint64_t seed = 1;
    bool certify = false, trimmed = false;

    auto* info = app.add_subcommand("info", "simplex counts, links and shape statistics");
    info->add_option("mesh", mesh_path)->required();

    auto* weights = app.add_subcommand("weights", "build the weight system");
    weights->add_option("mesh", mesh_path)->required();
    weights->add_option("-o,--output", out_path, "write the weight system to a file");
    weights->add_flag("--certify", certify, "run the weight certificates");

    auto* gen = app.add_subcommand("gen", "generate a random conforming form");
    gen->add_option("mesh", mesh_path)->required();
    gen->add_option("--k", k)->required()->check(CLI::NonNegativeNumber);
    gen->add_option("--degree", degree)->required()->check(CLI::PositiveNumber);
    gen->add_flag("--trimmed", trimmed);
    gen->add_option("--seed", seed);
    gen->add_option("-o,--output", out_path);

    auto* decompose = app.add_subcommand("decompose", "write W and every bubble");
    decompose->add_option("mesh", mesh_path)->required();
    decompose->add_option("form", form_path)->required();
    decompose->add_option("-o,--output", out_path)->required();

    auto* verify = app.add_subcommand("verify", "run the invariant suites on one form");
    verify->add_option("mesh", mesh_path)->required();
    verify->add_option("form", form_path)->required();
    verify->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}));
    verify->add_option("--seed", seed);
    verify->add_option("--points", points)->check(CLI::PositiveNumber);

    auto* oracle = app.add_subcommand("oracle", "pointwise check against the rational representation");
    oracle->add_option("mesh", mesh_path)->required();
    oracle->add_option("form", form_path)->required();
    oracle->add_option("--m", m)->required()->check(CLI::NonNegativeNumber);
    oracle->add_option("--points", points)->check(CLI::PositiveNumber);
    oracle->add_option("--seed", seed);

    auto* stability = app.add_subcommand("stability", "L2 growth of W and the bubbles on random inputs");
    stability->add_option("mesh", mesh_path)->required();
    stability->add_option("--k", k)->required()->check(CLI::NonNegativeNumber);
    stability->add_option("--degree", degree)->required()->check(CLI::PositiveNumber);
    stability->add_option("--trials", trials)->check(CLI::PositiveNumber);
    stability->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        check(bx_set_jobs(jobs));
        Loaded l;

        if (*info) {
            load(l, mesh_path, false);
            json rep = json::parse(fetch([&](char* b, size_t c, size_t* n) { return bx_mesh_info_json(l.mesh.get(), b, c, n); }));
            rep["command"] = "info";
            const auto& counts = rep.at("counts");
            for (size_t d = 0; d < counts.size(); ++d) std::cerr << (d ? " " : "") << "|D_" << d << "|=" << counts[d];
            std::cerr << '\n';
            std::cout << rep.dump(2) << '\n';
            return 0;
        }

        if (*weights) {
            load(l, mesh_path, true);
            if (!out_path.empty())
                write_file(out_path, fetch([&](char* b, size_t c, size_t* n) { return bx_weights_to_json(l.ws.get(), b, c, n); }));
            if (!certify) {
                if (out_path.empty())
                    std::cout << fetch([&](char* b, size_t c, size_t* n) { return bx_weights_to_json(l.ws.get(), b, c, n); })
                              << '\n';
                return 0;
            }
            Report r;
            check(bx_weights_certify(l.ws.get(), r.out()));
            json rep = report_json(r);
            rep["timings"]["weights_seconds"] = l.weights_seconds;
            std::cout << rep.dump(2) << '\n';
            return report_checks(rep) ? 0 : 1;
        }

        if (*gen) {
            load(l, mesh_path, false);
            Form u;
            check(bx_form_random(l.mesh.get(), k, degree, trimmed ? 1 : 0, seed, u.out()));
            std::string text = fetch([&](char* b, size_t c, size_t* n) { return bx_form_to_json(u.get(), b, c, n); });
            if (out_path.empty())
                std::cout << text << '\n';
            else
                write_file(out_path, text);
            return 0;
        }

        if (*decompose) {
            load(l, mesh_path, true);
            Form u;
            check(bx_form_load(l.mesh.get(), form_path.c_str(), u.out()));
            Decomp d;
            check(bx_decompose(l.ws.get(), u.get(), d.out()));
            std::error_code ec;
            std::filesystem::create_directories(out_path, ec);
            if (ec) throw Failure{BX_ERR_IO, "IoError: cannot create " + out_path};
            const std::filesystem::path dir(out_path);
            Form w;
            check(bx_decomposition_w(d.get(), w.out()));
            write_file((dir / "W.form").string(),
                       fetch([&](char* b, size_t c, size_t* n) { return bx_form_to_json(w.get(), b, c, n); }));
            size_t count = 0;
            check(bx_decomposition_num_bubbles(d.get(), &count));
            for (size_t i = 0; i < count; ++i) {
                std::string key = fetch([&](char* b, size_t c, size_t* n) { return bx_decomposition_bubble_key(d.get(), i, b, c, n); });
                Form bf;
                check(bx_decomposition_bubble(d.get(), i, bf.out()));
                write_file((dir / ("B_" + key + ".form")).string(),
                           fetch([&](char* b, size_t c, size_t* n) { return bx_form_to_json(bf.get(), b, c, n); }));
            }
            json man = json::parse(fetch([&](char* b, size_t c, size_t* n) { return bx_decomposition_manifest_json(d.get(), b, c, n); }));
            man["command"] = "decompose";
            write_file((dir / "manifest.json").string(), man.dump(2));
            std::cout << man.dump(2) << '\n';
            return man.at("residual_zero").get<bool>() && man.at("trace_zero").get<bool>() ? 0 : 1;
        }

        if (*verify || *oracle) {
            auto t0 = std::chrono::steady_clock::now();
            load(l, mesh_path, true);
            Form u;
            check(bx_form_load(l.mesh.get(), form_path.c_str(), u.out()));
            Report r;
            if (*verify)
                check(bx_verify(l.ws.get(), u.get(), level == "full" ? 1 : 0, points, seed, r.out()));
            else
                check(bx_oracle(l.ws.get(), u.get(), m, points, seed, r.out()));
            json rep = report_json(r);
            rep["timings"]["weights_seconds"] = l.weights_seconds;
            rep["timings"]["total_seconds"] = since(t0);
            std::cout << rep.dump(2) << '\n';
            return report_checks(rep) ? 0 : 1;
        }

        if (*stability) {
            load(l, mesh_path, true);
            Report r;
            check(bx_stability(l.ws.get(), k, degree, trials, seed, r.out()));
            std::cout << report_json(r).dump(2) << '\n';
            return 0;
        }
    } catch (const Failure& f) {
        std::cerr << "error: " << (f.message.empty() ? bx_error_name(f.status) : f.message) << '\n';
        return exit_code_for(f.status);
    } catch (const json::exception& e) {
        std::cerr << "error: malformed report: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
