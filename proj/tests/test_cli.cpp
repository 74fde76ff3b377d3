#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const char* kCli = QSL_CLI_PATH;

struct Run {
    int code = -1;
    std::string stdout_text;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("qsl_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

Run run(const std::string& args, const fs::path& out) {
    fs::path log = out / "stdout.txt";
    std::string cmd = std::string(kCli) + " --out " + out.string() + " " + args + " > " + log.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.stdout_text = slurp(log);
    fs::remove(log);
    return r;
}

std::map<std::string, std::string> tables(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
    return out;
}

const char* kSmall = "--nmax 3 --gram-n 3";

}  // namespace

TEST_CASE("every command is byte-for-byte deterministic") {
    const std::map<std::string, int> expected_code = {{"spherical", 1}, {"awcheck", 0}, {"genfun", 0}, {"gram", 0},
                                                      {"growth", 0},    {"gaussian", 0}, {"validate", 0}};
    for (const auto& [cmd, code] : expected_code) {
        CAPTURE(cmd);
        fs::path a = fresh_dir(cmd + "_a"), b = fresh_dir(cmd + "_b");
        Run ra = run(std::string(kSmall) + " " + cmd, a);
        Run rb = run(std::string(kSmall) + " " + cmd, b);
        CHECK(ra.code == code);
        CHECK(rb.code == code);
        CHECK(ra.stdout_text == rb.stdout_text);
        auto ta = tables(a), tb = tables(b);
        CHECK(ta.size() >= 2u);
        CHECK(ta.count(cmd + "_checks.csv") == 1u);
        CHECK(ta == tb);
    }
}

TEST_CASE("threads do not change the output") {
    fs::path a = fresh_dir("threads_a"), b = fresh_dir("threads_b");
    run("--gram-n 3 --threads 1 gram", a);
    run("--gram-n 3 --threads 4 gram", b);
    auto ta = tables(a), tb = tables(b);
    // Only the config header records the thread count.
    for (auto* t : {&ta, &tb})
        for (auto& [name, text] : *t) {
            auto pos = text.find("threads=");
            if (pos != std::string::npos) text.replace(pos, 9, "threads=_");
        }
    CHECK(ta == tb);
}

TEST_CASE("tables carry schema, tool and config headers") {
    fs::path d = fresh_dir("headers");
    run("--nmax 2 genfun", d);
    std::istringstream in(slurp(d / "genfun_functional.csv"));
    std::string l1, l2, l3, l4;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    std::getline(in, l4);
    CHECK(l1 == "#schema=functional/1");
    CHECK(l2.rfind("#tool=qsl ", 0) == 0);
    CHECK(l3.rfind("#config=q=0.5;a=0.3;precision=256;nmax=2;", 0) == 0);
    CHECK(l3.find("out=") == std::string::npos);
    CHECK(l4.rfind("n,", 0) == 0);
}

TEST_CASE("flags override the config file") {
    fs::path d = fresh_dir("config");
    fs::path cfg = d / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "# comment\nq=0.25\nnmax=2\n";
    }
    fs::path out = fresh_dir("config_out");
    Run r = run("--config " + cfg.string() + " --q 0.5 genfun", out);
    CHECK(r.code == 0);
    std::string text = slurp(out / "genfun_functional.csv");
    CHECK(text.find("#config=q=0.5;a=0.3;precision=256;nmax=2;") != std::string::npos);
}

TEST_CASE("json output parses and mirrors the csv table") {
    fs::path j = fresh_dir("json"), c = fresh_dir("csv");
    CHECK(run("--nmax 2 --format json genfun", j).code == 0);
    CHECK(run("--nmax 2 genfun", c).code == 0);
    auto doc = nlohmann::json::parse(slurp(j / "genfun_functional.json"));
    CHECK(doc["schema"] == "functional/1");
    CHECK(doc["config"]["nmax"] == "2");
    CHECK(doc["config"]["format"] == "json");
    REQUIRE(doc["rows"].size() == 3u);
    CHECK(doc["columns"][0] == "n");
    std::string lambda1 = doc["rows"][1][4].get<std::string>();
    CHECK(slurp(c / "genfun_functional.csv").find(lambda1) != std::string::npos);
}

TEST_CASE("exit codes") {
    fs::path d = fresh_dir("codes");
    CHECK(run("--q 1.5 genfun", d).code == 2);
    CHECK(run("--config /nonexistent/qsl.cfg genfun", d).code == 2);
    Run low = run("--precision 96 --nmax 2 genfun", d);
    CHECK(low.code == 3);
    CHECK(low.stdout_text.find("advisory") != std::string::npos);
    Run sph = run("--nmax 2 spherical", d);
    CHECK(sph.code == 1);
    CHECK(sph.stdout_text.find("FAIL closed_form_n1_match") != std::string::npos);
}
