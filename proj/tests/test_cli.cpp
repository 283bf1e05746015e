#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "levyflow/cli/commands.hpp"
#include "levyflow/cli/formats.hpp"
#include "levyflow/cli/ini.hpp"
#include "levyflow/cli/manifest.hpp"
#include "levyflow/cli/settings.hpp"
#include "levyflow/errors.hpp"

using namespace levyflow;
using namespace levyflow::cli;
namespace fs = std::filesystem;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::Io;
}

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("levyflow_cli_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

fs::path write_config(const fs::path& dir, const std::string& text) {
    const auto p = dir / "run.ini";
    write_file(p, text);
    return p;
}

struct Result {
    int code;
    std::string log;
    std::string err;
};

Result run(const std::string& cmd, const CommandOptions& opt) {
    std::ostringstream log;
    std::ostringstream err;
    const int c = run_command(cmd, opt, log, err);
    return {c, log.str(), err.str()};
}

nlohmann::json manifest_at(const fs::path& p) { return nlohmann::json::parse(read_file(p)); }

const fs::path kSource = LEVYFLOW_SOURCE_DIR;

} // namespace

TEST_CASE("ini grammar") {
    const auto ini = Ini::parse("# comment\n; other\n[a]\nx = 1\ny=two words \n\n[b.c]\nk_1 = \n");
    REQUIRE(ini.sections().size() == 2);
    CHECK(*ini.find("a", "x") == "1");
    CHECK(*ini.find("a", "y") == "two words");
    CHECK(*ini.find("b.c", "k_1") == "");
    CHECK(ini.find("a", "z") == nullptr);
    CHECK(ini.section("q") == nullptr);
    CHECK(Ini::parse(ini.dump()) == ini);

    const auto bad = [](const char* text) {
        try {
            (void)Ini::parse(text, "cfg");
        } catch (const Error& e) {
            return std::pair{e.code(), std::string(e.what())};
        }
        return std::pair{ErrorCode::Io, std::string()};
    };
    CHECK(bad("x = 1\n").first == ErrorCode::ConfigParse);
    CHECK(bad("[a]\n[a]\n").first == ErrorCode::ConfigParse);
    CHECK(bad("[a]\nx = 1\nx = 2\n").first == ErrorCode::ConfigParse);
    CHECK(bad("[a\n").first == ErrorCode::ConfigParse);
    CHECK(bad("[a]\njust text\n").first == ErrorCode::ConfigParse);
    CHECK(bad("[a]\nbad key = 1\n").first == ErrorCode::ConfigParse);
    CHECK(bad("[a]\n\n x = 1\n = 3\n").second.find("cfg:4") != std::string::npos);
    CHECK(code_of([] { (void)Ini::load("/nonexistent/levyflow.ini"); }) == ErrorCode::Io);
}

TEST_CASE("settings defaults and overrides") {
    const auto s = resolve(Ini{});
    CHECK(s.macro.steps == 150);
    CHECK(s.macro.grid == Grid::plane(2.1, 2.1, 21, 21));
    CHECK(s.macro_M == 500);
    CHECK(s.micro.M == 2500);
    CHECK(s.ensemble_samples() == 500);
    CHECK(s.symbol.name == "alpha_stable");

    const auto o = resolve(Ini::parse("[macro]\nN_x1 = 31\nh_x1 = 0.05\nnoise = false\nfrac_tail_terms = 40\n"
                                      "[micro]\nnoise = switching\nswitch_weights = 0.2, 0.3, 0.5\n"
                                      "[ensemble]\nkind = micro\n[report]\nlevels = 0.1, 0.2\nrange = 0, 2\n"));
    CHECK(o.macro.grid.Mx() == 31);
    CHECK(o.macro.grid.Lx() == doctest::Approx(1.55));
    CHECK(o.macro.qwiener.Lx == doctest::Approx(1.55));
    CHECK_FALSE(o.macro.noise);
    CHECK(o.macro.frac.tail_terms == 40);
    CHECK(std::get<SwitchingNoise>(o.micro.noise).weights[0] == 0.2);
    CHECK(o.ensemble.kind == EnsembleKind::Micro);
    CHECK(o.ensemble_samples() == 100);
    CHECK(o.report.levels == std::vector<double>{0.1, 0.2});
    CHECK(o.report.range->second == 2.0);

    const auto code = [](const char* text) { return code_of([&] { (void)resolve(Ini::parse(text)); }); };
    CHECK(code("[nope]\n") == ErrorCode::ConfigParse);
    CHECK(code("[macro]\nfoo = 1\n") == ErrorCode::ConfigParse);
    CHECK(code("[macro]\ntau = abc\n") == ErrorCode::ConfigParse);
    CHECK(code("[macro]\nN = 1.5\n") == ErrorCode::ConfigParse);
    CHECK(code("[macro]\ntau = -1\n") == ErrorCode::ConfigInvalid);
    CHECK(code("[micro]\nnoise = levy\n") == ErrorCode::ConfigInvalid);
    CHECK(code("[symbol]\nname = bogus\n") == ErrorCode::ConfigInvalid);
    CHECK(code("[micro]\nnoise = switching\nswitch_weights = 0.5, 0.5, 0.5\n") == ErrorCode::ConfigInvalid);
}

TEST_CASE("settings round trip through the config echo") {
    for (const char* text : {"", "[macro]\nN = 7\nsnapshot_steps = 1, 3\nfrac_tail_terms = 12\n[micro]\nnoise = cauchy_modulated\n",
                             "[report]\nrange = -1, 1\nlevels = 0.5\ninput = somewhere\n[ensemble]\nsamples = 9\nexport = 1, 4\n"}) {
        const auto s = resolve(Ini::parse(text));
        const auto echo = to_ini(s);
        const auto again = resolve(Ini::parse(echo.dump()));
        CHECK(to_ini(again) == echo);
    }
}

TEST_CASE("shipped configs resolve") {
    for (const char* name : {"configs/macro.ini", "configs/micro.ini"}) {
        const auto s = resolve(Ini::load(kSource / name));
        CHECK(to_ini(resolve(Ini::parse(to_ini(s).dump()))) == to_ini(s));
    }
    const auto micro = resolve(Ini::load(kSource / "configs/micro.ini"));
    CHECK(micro.ensemble.kind == EnsembleKind::Micro);
    CHECK(micro.micro.M == 2500);
}

TEST_CASE("shortest double formatting") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double v = u(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(150) == "150");
}

TEST_CASE("lvf round trip") {
    const Grid g = Grid::plane(1.0, 2.0, 3, 2);
    GridField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 0.1 * static_cast<double>(i) - 0.25;
    const auto bytes = encode_lvf(f);
    CHECK(bytes.size() == 4 + 8 + 6 * 8);
    CHECK(bytes.substr(0, 4) == "LVF1");
    CHECK(static_cast<unsigned char>(bytes[4]) == 3);
    CHECK(static_cast<unsigned char>(bytes[8]) == 2);
    const auto raw = decode_lvf(bytes);
    CHECK(raw.Mx == 3);
    CHECK(raw.My == 2);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(raw.values[i] == f[i]);
    CHECK(raw.at(2, 1) == f.at(2, 1));
    CHECK(encode_lvf(raw) == bytes);
    CHECK(code_of([&] { (void)decode_lvf(bytes.substr(0, 20)); }) == ErrorCode::Io);
    CHECK(code_of([&] { (void)decode_lvf("LVF2" + bytes.substr(4)); }) == ErrorCode::Io);
    CHECK(code_of([&] { (void)decode_lvf(bytes + "x"); }) == ErrorCode::Io);
}

TEST_CASE("csv") {
    CHECK(csv_number(0.1) == "0.10000000000000001");
    CHECK(csv_number(2.0) == "2");
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
    CsvTable t({"a", "b"});
    t.row({"1", "x,y"});
    CHECK(t.rows() == 1);
    CHECK(t.str() == "a,b\r\n1,\"x,y\"\r\n");
    CHECK_THROWS_AS(t.row({"only one"}), Error);

    const Grid g = Grid::plane(1.0, 1.0, 2, 2);
    const GridField f(g, std::vector<double>{1, 2, 3, 4});
    CHECK(field_csv(f) == "1,2\r\n3,4\r\n");
}

TEST_CASE("gray mapping and pgm") {
    CHECK(gray_level(0.5, 0.0, 1.0) == 128);
    CHECK(gray_level(0.0, 0.0, 1.0) == 0);
    CHECK(gray_level(1.0, 0.0, 1.0) == 255);
    CHECK(gray_level(-3.0, 0.0, 1.0) == 0);
    CHECK(gray_level(7.0, 0.0, 1.0) == 255);
    CHECK(gray_level(0.25, 0.0, 1.0) == 64);
    CHECK(gray_level(4.0, 4.0, 4.0) == 128);

    const RawField f{2, 2, {0.0, 1.0, 0.5, 0.25}};
    const std::string expected = std::string("P5\n2 2\n255\n") + char(128) + char(64) + char(0) + char(255);
    CHECK(encode_pgm(f, 0.0, 1.0) == expected);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("marching squares on a ramp") {
    // f(k, j) = k on 3 x 2 nodes: level 0.5 crosses at x = 0.5 from y = 0 to y = 1
    const RawField f{3, 2, {0, 1, 2, 0, 1, 2}};
    const std::vector<double> levels{0.5, 1.5, 5.0};
    const auto segs = marching_squares(f, levels);
    REQUIRE(segs.size() == 2);
    for (const auto& s : segs) {
        const double x = s.level;
        CHECK(s.x0 == doctest::Approx(x));
        CHECK(s.x1 == doctest::Approx(x));
        CHECK(std::min(s.y0, s.y1) == doctest::Approx(0.0));
        CHECK(std::max(s.y0, s.y1) == doctest::Approx(1.0));
    }
}

TEST_CASE("marching squares saddle follows the centre average") {
    // corners (0,0) = 1, (1,0) = 0, (0,1) = 0, (1,1) = 1; centre average 0.5
    const RawField f{2, 2, {1, 0, 0, 1}};
    using Seg = std::set<std::pair<double, double>>;
    const auto as_set = [](const ContourSegment& s) {
        const auto r = [](double v) { return std::round(v * 1e9) / 1e9; };
        return Seg{{r(s.x0), r(s.y0)}, {r(s.x1), r(s.y1)}};
    };
    {
        const std::vector<double> lv{0.4}; // centre above: the low corners are cut off
        const auto segs = marching_squares(f, lv);
        REQUIRE(segs.size() == 2);
        const std::set<Seg> got{as_set(segs[0]), as_set(segs[1])};
        const std::set<Seg> want{Seg{{0.6, 0.0}, {1.0, 0.4}}, Seg{{0.0, 0.6}, {0.4, 1.0}}};
        CHECK(got == want);
    }
    {
        const std::vector<double> lv{0.6}; // centre below: the high corners are cut off
        const auto segs = marching_squares(f, lv);
        REQUIRE(segs.size() == 2);
        const std::set<Seg> got{as_set(segs[0]), as_set(segs[1])};
        const std::set<Seg> want{Seg{{0.4, 0.0}, {0.0, 0.4}}, Seg{{1.0, 0.6}, {0.6, 1.0}}};
        CHECK(got == want);
    }
}

TEST_CASE("exit code mapping") {
    CHECK(exit_code_for(ErrorCode::ConfigParse) == 2);
    CHECK(exit_code_for(ErrorCode::ConfigInvalid) == 2);
    CHECK(exit_code_for(ErrorCode::Io) == 2);
    CHECK(exit_code_for(ErrorCode::SolverDiverged) == 5);
    CHECK(exit_code_for(ErrorCode::InvariantViolation) == 6);
    CHECK(exit_code_for(ErrorCode::NotRealValued) == 3);
    CHECK(exit_code_for(ErrorCode::NyquistViolation) == 3);
}

TEST_CASE("symbol and fracheck commands") {
    TempDir tmp;
    CommandOptions opt;
    opt.out = tmp.path / "sym";
    auto r = run("symbol", opt);
    REQUIRE(r.code == 0);
    auto m = manifest_at(opt.out / "manifest.json");
    CHECK(m["command"] == "symbol");
    CHECK(m["summary"]["max_ratio"].get<double>() <= 1.0);
    CHECK(read_file(opt.out / "symbol.csv").rfind("xi,re_psi,im_psi,ratio\r\n", 0) == 0);

    opt.out = tmp.path / "frac";
    opt.config = write_config(tmp.path, "[fracheck]\np = 1.5\nresolutions = 32, 64\nmodes = 1\n");
    r = run("fracheck", opt);
    CHECK(r.code == 0);
    const auto csv = read_file(opt.out / "fracheck.csv");
    CHECK(csv.rfind("p,mode,M,fd_eigenvalue,exact_eigenvalue,rel_error\r\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    opt.config = write_config(tmp.path, "[symbol]\nname = bogus\n");
    CHECK(run("symbol", opt).code == exit_code::config);
    opt.config = write_config(tmp.path, "[symbol]\nunknown = 1\n");
    CHECK(run("symbol", opt).code == exit_code::config);
    opt.config = tmp.path / "missing.ini";
    CHECK(run("symbol", opt).code == exit_code::config);
}

TEST_CASE("fracheck reports non-convergence") {
    TempDir tmp;
    CommandOptions opt;
    opt.out = tmp.path / "o";
    // the same resolution twice cannot strictly decrease the error
    opt.config = write_config(tmp.path, "[fracheck]\np = 1\nresolutions = 32, 32\nmodes = 1\n");
    CHECK(run("fracheck", opt).code == exit_code::convergence);
}

TEST_CASE("macro command, manifest and rerun digests") {
    TempDir tmp;
    CommandOptions opt;
    opt.out = tmp.path / "a";
    opt.steps = 3;
    opt.config = write_config(tmp.path, "[macro]\nsnapshot_steps = 0, 2\n");
    REQUIRE(run("macro", opt).code == 0);
    for (const char* f : {"timeseries.csv", "H_step0000.lvf", "C_step0002.csv", "N_step0003.lvf", "manifest.json"})
        CHECK_MESSAGE(fs::exists(opt.out / f), f);
    const auto ts = read_file(opt.out / "timeseries.csv");
    CHECK(std::count(ts.begin(), ts.end(), '\n') == 5);

    const auto m = RunManifest::from_json(manifest_at(opt.out / "manifest.json"));
    CHECK(verify_outputs(m, opt.out).empty());
    CHECK(m.base_seed == 1);
    // the echoed config reproduces the run settings
    const auto echoed = resolve(Ini::parse(m.config_echo));
    CHECK(echoed.macro.snapshot_steps == std::vector<int>{0, 2});
    CHECK(RunManifest::from_json(m.to_json()).to_json() == m.to_json());

    write_file(opt.out / "H_step0000.lvf", "tampered");
    CHECK(verify_outputs(m, opt.out) == std::vector<std::string>{"H_step0000.lvf"});

    CommandOptions again = opt;
    again.out = tmp.path / "b";
    REQUIRE(run("macro", again).code == 0);
    const auto m2 = RunManifest::from_json(manifest_at(again.out / "manifest.json"));
    REQUIRE(m2.outputs.size() == m.outputs.size());
    for (std::size_t i = 0; i < m.outputs.size(); ++i) {
        CHECK(m2.outputs[i].path == m.outputs[i].path);
        CHECK(m2.outputs[i].sha256 == m.outputs[i].sha256);
    }

    CommandOptions other = opt;
    other.out = tmp.path / "c";
    other.seed = 2;
    REQUIRE(run("macro", other).code == 0);
    const auto m3 = RunManifest::from_json(manifest_at(other.out / "manifest.json"));
    CHECK(m3.outputs.back().sha256 != m2.outputs.back().sha256);
}

TEST_CASE("macro solver failure maps to its exit code") {
    TempDir tmp;
    CommandOptions opt;
    opt.out = tmp.path / "o";
    opt.steps = 2;
    opt.config = write_config(tmp.path, "[macro]\nsolver_tolerance = 1e-16\nsolver_max_iterations = 1\n");
    const auto r = run("macro", opt);
    CHECK(r.code == exit_code::solver);
    CHECK(r.err.find("SolverDiverged") != std::string::npos);
}

TEST_CASE("micro command") {
    TempDir tmp;
    CommandOptions opt;
    opt.out = tmp.path / "o";
    opt.steps = 4;
    opt.config = write_config(tmp.path, "[micro]\nM = 100\n");
    REQUIRE(run("micro", opt).code == 0);
    for (const char* f : {"survival.csv", "particles.csv", "He.lvf", "N_deposit.csv"}) CHECK_MESSAGE(fs::exists(opt.out / f), f);
    const auto p = read_file(opt.out / "particles.csv");
    CHECK(std::count(p.begin(), p.end(), '\n') == 101);
    const auto he = decode_lvf(read_file(opt.out / "He.lvf"));
    CHECK(he.Mx == 50);
}

TEST_CASE("ensemble commands and worker independence") {
    TempDir tmp;
    for (const char* kind : {"macro", "micro"}) {
        std::vector<std::string> digests;
        for (unsigned w : {1u, 3u}) {
            CommandOptions opt;
            opt.out = tmp.path / (std::string(kind) + std::to_string(w));
            opt.workers = w;
            opt.steps = 3;
            opt.samples = 6;
            opt.config = write_config(tmp.path, std::string("[ensemble]\nkind = ") + kind + "\nexport = 0, 5\n[micro]\nM = 400\n");
            REQUIRE(run("ensemble", opt).code == 0);
            const auto m = RunManifest::from_json(manifest_at(opt.out / "manifest.json"));
            std::string all;
            for (const auto& o : m.outputs) all += o.path + ":" + o.sha256 + "\n";
            digests.push_back(all);
            CHECK(fs::exists(opt.out / "sample_0005"));
        }
        CHECK(digests[0] == digests[1]);
    }
    CHECK(fs::exists(tmp.path / "macro1" / "mean_H_step0003.lvf"));
    CHECK(fs::exists(tmp.path / "macro1" / "ensemble_summary.csv"));
    CHECK(fs::exists(tmp.path / "micro1" / "alive_fraction.csv"));
}

TEST_CASE("report command") {
    TempDir tmp;
    CommandOptions opt;
    opt.out = tmp.path / "run";
    opt.steps = 1;
    REQUIRE(run("macro", opt).code == 0);
    opt.input = opt.out;
    opt.out = tmp.path / "rep";
    REQUIRE(run("report", opt).code == 0);
    CHECK(fs::exists(opt.out / "H_step0001.pgm"));
    CHECK(fs::exists(opt.out / "contours.csv"));
    const auto m = RunManifest::from_json(manifest_at(opt.out / "report_manifest.json"));
    CHECK(verify_outputs(m, opt.out).empty());
    const auto pgm = read_file(opt.out / "H_step0001.pgm");
    CHECK(pgm.rfind("P5\n21 21\n255\n", 0) == 0);
    CHECK(pgm.size() == 13 + 21 * 21);

    opt.input = tmp.path / "nowhere";
    CHECK(run("report", opt).code == exit_code::config);
    fs::create_directories(tmp.path / "empty");
    opt.input = tmp.path / "empty";
    CHECK(run("report", opt).code == exit_code::config);
}

TEST_CASE("binary entry point") {
    TempDir tmp;
    const std::string bin = LEVYFLOW_BIN;
    const auto out = tmp.path / "bin";
    CHECK(std::system((bin + " --out " + out.string() + " symbol > /dev/null").c_str()) == 0);
    CHECK(fs::exists(out / "manifest.json"));

    const auto env_out = tmp.path / "env";
    const std::string cmd = "LEVYFLOW_OUT=" + env_out.string() + " " + bin + " --out " + (tmp.path / "ignored").string() + " symbol > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(env_out / "symbol.csv"));
    CHECK_FALSE(fs::exists(tmp.path / "ignored"));

    const auto status = [&](const std::string& args) {
        const int s = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(s);
    };
    CHECK(status("") == 2);
    CHECK(status("frobnicate") == 2);
    CHECK(status("--config /nonexistent.ini --out " + (tmp.path / "x").string() + " symbol") == 2);
    CHECK(status("--version") == 0);
}
