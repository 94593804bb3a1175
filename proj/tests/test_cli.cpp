#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "volterra/json_io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("volterra_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(CLI_BIN) + " " + args;
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// CSV body without the '#' metadata lines.
std::string data_section(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') out << line << "\n";
    return out.str();
}

const char* kExp = R"({"type":"exponential","k":0.5,"theta":1.0})";

}  // namespace

TEST_CASE("repeated runs are byte-identical") {
    const fs::path a = work_dir() / "det_a.csv";
    const fs::path b = work_dir() / "det_b.csv";
    const std::string base = std::string("resolvent --kernel '") + kExp +
                             "' --delta 0.1 --horizon 5 --tol 1e-10 --grid 401 --out ";
    REQUIRE(run(base + a.string()) == 0);
    REQUIRE(run(base + b.string()) == 0);
    const std::string ca = slurp(a);
    CHECK(ca == slurp(b));
    CHECK(ca.find("# k_eff=") != std::string::npos);
    CHECK(ca.find("t,h\n") != std::string::npos);
}

TEST_CASE("gamma table shape and edge values") {
    const fs::path out = work_dir() / "gamma.csv";
    REQUIRE(run("gamma-table --n 3 --grid 300 --out " + out.string()) == 0);
    const std::string body = data_section(slurp(out));
    std::istringstream in(body);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,t,gamma");
    int rows = 0;
    std::string first_row;
    while (std::getline(in, line))
        if (!line.empty()) {
            if (rows == 0) first_row = line;
            ++rows;
        }
    CHECK(rows == 3 * 300);
    CHECK(first_row == "1,0,1");  // gamma_1(0) = 1 under the half-open convention
}

TEST_CASE("parametric and tabulated kernels give the identical resolvent") {
    const double delta = 0.125;
    const volterra::kernel_spec e = volterra::kernel_from_json(nlohmann::json::parse(kExp));
    const volterra::piecewise_kernel pk = volterra::discretize(e, delta, 5.0);

    volterra::tabulated_kernel tab;
    tab.delta = delta;
    tab.betas = pk.betas;
    const fs::path tab_json = work_dir() / "tab.json";
    std::ofstream(tab_json) << volterra::kernel_to_json(tab).dump();

    const fs::path from_exp = work_dir() / "h_exp.csv";
    const fs::path from_tab = work_dir() / "h_tab.csv";
    REQUIRE(run(std::string("resolvent --kernel '") + kExp +
                "' --delta 0.125 --horizon 5 --grid 201 --out " + from_exp.string()) == 0);
    REQUIRE(run("resolvent --kernel " + tab_json.string() +
                " --delta 0.125 --horizon 5 --grid 201 --out " + from_tab.string()) == 0);
    CHECK(data_section(slurp(from_exp)) == data_section(slurp(from_tab)));
}

TEST_CASE("solve writes the grid and an atoms sidecar") {
    const fs::path sig = work_dir() / "sig.json";
    std::ofstream(sig) << R"({"atoms":[[0.5,2.0]],"regular":{"type":"constant","value":1.0}})";
    const fs::path out = work_dir() / "y.csv";
    REQUIRE(run(std::string("solve --kernel '") + kExp + "' --delta 0.25 --horizon 5 " +
                "--signal " + sig.string() + " --out " + out.string()) == 0);

    const std::string body = data_section(slurp(out));
    std::istringstream in(body);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,y_regular");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 21);  // floor(5/0.25) + 1

    const std::string atoms = slurp(fs::path(out.string() + ".atoms.csv"));
    CHECK(atoms == "t,w\n0.5,2\n");
}

TEST_CASE("certificate JSON matches the worked example") {
    const fs::path out = work_dir() / "cert.json";
    REQUIRE(run(std::string("certify --kernel ") +
                "'{\"type\":\"powerlaw\",\"k\":0.5,\"theta\":1.0,\"c\":1.0}' " +
                "--delta 0.01 --horizon 5 --f-mass 2 --out " + out.string()) == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j.at("norm") == "SUP");
    CHECK(j.at("kernel_error").get<double>() == Catch::Approx(0.01));
    CHECK(j.at("resolvent_error").get<double>() == Catch::Approx(0.04));
    CHECK(j.at("solution_error").get<double>() == Catch::Approx(0.08));
}

TEST_CASE("validate passes a sound build and fails an unsound claim") {
    const fs::path log = work_dir() / "val.txt";
    const int ok = run(std::string("validate --kernel '") + kExp +
                       "' --delta 0.05 --horizon 5 --tol 1e-10 --step 0.01 > " +
                       log.string());
    CHECK(ok == 0);
    CHECK(slurp(log).find("PASS") != std::string::npos);

    // The constant kernel is represented exactly, so its certificate is zero;
    // a step this coarse cannot meet it and the gate must say so.
    const fs::path log2 = work_dir() / "val2.txt";
    const int bad = run(std::string("validate --kernel '{\"type\":\"constant\",\"k\":0.5}' ") +
                        "--delta 0.25 --horizon 5 --tol 1e-10 --step 0.5 > " + log2.string());
    CHECK(bad == 2);
    CHECK(slurp(log2).find("FAIL") != std::string::npos);
}

TEST_CASE("errors exit with one") {
    CHECK(run("resolvent --kernel '{\"type\":\"nope\"}' --delta 0.1 --horizon 5 --out " +
              (work_dir() / "x.csv").string() + " 2> /dev/null") == 1);
    CHECK(run(std::string("resolvent --kernel '") + kExp +
              "' --delta 0.3 --horizon 5 --out /nonexistent-dir-zz/x.csv 2> /dev/null") == 1);
}

TEST_CASE("numbers are printed with round-trip precision") {
    const fs::path out = work_dir() / "prec.csv";
    REQUIRE(run(std::string("resolvent --kernel '") + kExp +
                "' --delta 0.1 --horizon 1 --grid 11 --out " + out.string()) == 0);
    std::istringstream in(data_section(slurp(out)));
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    // h(0) = beta_0 = k*theta = 0.5, printed exactly.
    CHECK(first == "0,0.5");
}