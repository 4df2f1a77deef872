#include "kerneltv/image_io.hpp"
#include "kerneltv/noise.hpp"

#include "support/synthetic.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace ktv;

namespace {

namespace fs = std::filesystem;

const std::string kCli = KERNELTV_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// runs the CLI with stdout+stderr captured
RunResult run_cli(const std::string& args) {
    const auto out_path = fs::temp_directory_path() / "ktv_cli_out.txt";
    const std::string cmd = kCli + " " + args + " > " + out_path.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string temp_file(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string make_noisy_input() {
    static std::string path;
    if (path.empty()) {
        path = temp_file("cli_noisy.pgm");
        save_image(path, add_multiplicative_gaussian(testing::boat_gray(48), {20.0, 3}));
    }
    return path;
}

} // namespace

TEST_CASE("help and config errors use the documented exit codes") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("denoise --help").exit_code == 0);

    const RunResult missing = run_cli("denoise " + make_noisy_input() + " " +
                                      temp_file("cli_x.pgm") + " --method gk-gtv");
    CHECK(missing.exit_code == 2);
    CHECK(missing.out.find("--delta") != std::string::npos);

    CHECK(run_cli("denoise in.pgm out.pgm").exit_code == 2);  // --method required
    CHECK(run_cli("denoise " + make_noisy_input() + " " + temp_file("cli_x.pgm") +
                  " --method pk-gtv --degree 1.1 --delta 0.4")
              .exit_code == 2);
    CHECK(run_cli("denoise /nonexistent.pgm " + temp_file("cli_x.pgm") + " --method gtv")
              .exit_code == 1);
}

TEST_CASE("degree-1 polynomial run equals the gtv method byte for byte") {
    const std::string in = make_noisy_input();
    const std::string out_a = temp_file("cli_gtv.pgm");
    const std::string out_b = temp_file("cli_pk1.pgm");
    CHECK(run_cli("denoise " + in + " " + out_a + " --method gtv --iters 10").exit_code == 0);
    CHECK(run_cli("denoise " + in + " " + out_b +
                  " --method pk-gtv --degree 1.0 --couple-level 1 --iters 10")
              .exit_code == 0);
    CHECK(read_bytes(out_a) == read_bytes(out_b));
}

TEST_CASE("denoise prints a PSNR line when given a reference") {
    const std::string clean = temp_file("cli_clean.pgm");
    save_image(clean, testing::boat_gray(48));
    const RunResult r =
        run_cli("denoise " + make_noisy_input() + " " + temp_file("cli_dn.pgm") +
                " --method gk-gtv --delta 0.5 --lambda 10 --iters 10 --ref " + clean);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("PSNR") != std::string::npos);
    CHECK(r.out.find("dB") != std::string::npos);
}

TEST_CASE("denoise writes diagnostics and graph stats CSVs") {
    const std::string diag = temp_file("cli_diag.csv");
    const std::string gstats = temp_file("cli_gstats.csv");
    const RunResult r = run_cli("denoise " + make_noisy_input() + " " +
                                temp_file("cli_dn2.pgm") +
                                " --method gk-nltv --delta 0.5 --iters 4 --diag " + diag +
                                " --graph-stats " + gstats);
    CHECK(r.exit_code == 0);
    const std::string d = read_bytes(diag);
    CHECK(d.rfind("iter,max_change,clamp_warnings,wall_ms\n", 0) == 0);
    CHECK(read_bytes(gstats).find("mean_degree,") != std::string::npos);
    // graph stats only make sense for nonlocal methods
    CHECK(run_cli("denoise " + make_noisy_input() + " " + temp_file("cli_dn3.pgm") +
                  " --method gtv --iters 2 --graph-stats " + gstats)
              .exit_code == 2);
}

TEST_CASE("enhance exports the kernel-space image") {
    SUBCASE("gaussian on black input is black") {
        const std::string in = temp_file("cli_black.pgm");
        save_image(in, Image(16, 16, 1, 0.0));
        const std::string out = temp_file("cli_black_out.pgm");
        CHECK(run_cli("enhance " + in + " " + out +
                      " --method gk-gtv --delta 0.5 --iters 5")
                  .exit_code == 0);
        for (unsigned char b : read_bytes(out).substr(13)) CHECK(b == 0);
    }
    SUBCASE("degree-1 polynomial with zero iterations is the identity") {
        std::vector<std::uint8_t> ramp(256);
        for (int i = 0; i < 256; ++i) ramp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
        const std::string in = temp_file("cli_ramp.pgm");
        save_image(in, from_u8(ramp, 16, 16, 1));
        const std::string out = temp_file("cli_ramp_out.pgm");
        CHECK(run_cli("enhance " + in + " " + out +
                      " --method pk-gtv --degree 1.0 --couple-level 1 --iters 0")
                  .exit_code == 0);
        CHECK(read_bytes(out) == read_bytes(in));
    }
    SUBCASE("score file drives the parameter choice") {
        const std::string scores = temp_file("cli_scores.csv");
        std::ofstream(scores) << "0.3,3.1\n0.5,2.9\n";
        const RunResult r = run_cli("enhance " + make_noisy_input() + " " +
                                    temp_file("cli_enh.pgm") +
                                    " --method gk-nltv --iters 2 --scores " + scores);
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("selected param 0.5") != std::string::npos);
    }
}

TEST_CASE("noise subcommand is reproducible") {
    const std::string clean = temp_file("cli_clean2.pgm");
    save_image(clean, testing::house_gray(32));
    const std::string a = temp_file("cli_noise_a.pgm");
    const std::string b = temp_file("cli_noise_b.pgm");
    CHECK(run_cli("noise " + clean + " " + a + " --sigma 20 --seed 11").exit_code == 0);
    CHECK(run_cli("noise " + clean + " " + b + " --sigma 20 --seed 11").exit_code == 0);
    CHECK(read_bytes(a) == read_bytes(b));
}

TEST_CASE("sweep emits one CSV row per grid point with the expected trends") {
    const std::string clean = temp_file("cli_clean3.pgm");
    save_image(clean, testing::boat_gray(48));
    const std::string csv = temp_file("cli_sweep.csv");
    const RunResult r = run_cli("sweep --clean " + clean +
                                " --method gk-gtv --iters 3 --seed 5 --out " + csv);
    CHECK(r.exit_code == 0);
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "param,ratio,psnr_db");
    std::vector<double> ratios;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        ratios.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    }
    REQUIRE(ratios.size() == 10);
    for (std::size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i] < ratios[i - 1]);

    CHECK(run_cli("sweep --clean " + clean + " --method gtv --out " + csv).exit_code == 2);

    // a pre-made noisy image works in place of the noise spec
    const std::string noisy = make_noisy_input();
    CHECK(run_cli("sweep --clean " + clean + " --noisy " + noisy +
                  " --method pk-gtv --iters 2 --grid 1.1:0.3:1.7 --out " + csv)
              .exit_code == 0);
    std::ifstream in2(csv);
    int lines = 0;
    std::string l;
    while (std::getline(in2, l)) ++lines;
    CHECK(lines == 4); // header + 3 grid points
}

TEST_CASE("bench produces a deterministic, best-marked table") {
    const auto dir = fs::temp_directory_path() / "ktv_bench_in";
    fs::create_directories(dir);
    save_image((dir / "alpha.pgm").string(), testing::boat_gray(32));
    save_image((dir / "beta.pgm").string(), testing::house_gray(32));

    const std::string csv_a = temp_file("cli_bench_a.csv");
    const std::string csv_b = temp_file("cli_bench_b.csv");
    const std::string args = "bench --input-dir " + dir.string() +
                             " --seed 7 --threads 2 --iters 5 --omit-timing --out ";
    CHECK(run_cli(args + csv_a).exit_code == 0);
    CHECK(run_cli(args + csv_b).exit_code == 0);
    const std::string table = read_bytes(csv_a);
    CHECK(table == read_bytes(csv_b));

    std::istringstream in(table);
    std::string line;
    std::getline(in, line);
    CHECK(line == "image,sigma,method,param,psnr_db,iters,wall_ms");
    int rows = 0, stars = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.find('*') != std::string::npos) ++stars;
        CHECK(line.substr(line.size() - 6) == ",0.000"); // wall_ms omitted
    }
    CHECK(rows == 2 * 2 * 6);
    CHECK(stars == 2 * 2); // one best method per image x sigma
}
