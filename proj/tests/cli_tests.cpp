// End-to-end checks of the command-line tool: exit codes, file round trips,
// determinism of CSV outputs. Invoked by ctest with the binary path as the
// only argument.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <poleswap/generators.hpp>
#include <poleswap/matrix_market.hpp>

using namespace poleswap;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (ok) {
        std::printf("[ok]   %s\n", what.c_str());
    } else {
        std::printf("[FAIL] %s\n", what.c_str());
        ++failures;
    }
}

int run(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool exists(const std::string& path) { return std::ifstream(path).good(); }

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_tests <path-to-cli>\n");
        return 2;
    }
    const std::string cli = argv[1];
    const std::string quiet = " > cli_stdout.txt 2> cli_stderr.txt";

    // solve round trip on a generated pencil
    {
        const auto P = gen_random_palindromic(9, 7);
        write_matrix("cli_in.mtx", P.A);
        const int rc = run(cli + " solve --in cli_in.mtx --out cli_solve.csv --accumulate-q" + quiet);
        check(rc == 0, "solve exits 0");
        const std::string csv = slurp("cli_solve.csv");
        check(csv.find("# poleswap-csv v1 solve") == 0, "solve CSV is versioned");
        check(csv.find("index,re,im,pair,infinite") != std::string::npos, "solve CSV has the eigenvalue header");
        int rows = 0;
        std::istringstream ss(csv);
        std::string line;
        bool in_rows = false;
        double be = 1.0;
        while (std::getline(ss, line)) {
            if (line.rfind("index,", 0) == 0) {
                in_rows = true;
                continue;
            }
            if (line.rfind("#", 0) == 0) {
                in_rows = false;
                continue;
            }
            if (in_rows && !line.empty()) ++rows;
            if (line.rfind("9,", 0) == 0) { // summary row
                const auto c1 = line.find(',');
                const auto c2 = line.find(',', c1 + 1);
                be = std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
            }
        }
        check(rows == 9, "solve CSV has n eigenvalue rows");
        check(be < 1e-13, "reported backward error is small");
    }

    // malformed input: ParseError exit code, no partial output
    {
        std::ofstream bad("cli_bad.mtx");
        bad << "this is not a matrix market file\n";
        bad.close();
        std::remove("cli_badout.csv");
        const int rc = run(cli + " solve --in cli_bad.mtx --out cli_badout.csv" + quiet);
        check(rc == 1, "malformed file exits with the parse code");
        check(!exists("cli_badout.csv"), "no partial output file is written");
    }

    // shape violation: ShapeError exit code
    {
        Matrix A = Matrix::Zero(4, 4);
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 4; ++j) A(i, j) = Complex(1, 0); // dense: violates the zero region
        write_matrix("cli_shape.mtx", A);
        const int rc = run(cli + " solve --in cli_shape.mtx --out cli_shapeout.csv" + quiet);
        check(rc == 2, "shape violation exits with the shape code");
    }

    // random-bench: row count and determinism
    {
        const std::string cmd = cli + " random-bench --sizes 8,12 --seeds 3 --out ";
        check(run(cmd + "cli_bench1.csv" + quiet) == 0, "random-bench exits 0");
        check(run(cmd + "cli_bench2.csv" + quiet) == 0, "random-bench exits 0 again");
        const std::string b1 = slurp("cli_bench1.csv");
        check(b1 == slurp("cli_bench2.csv"), "random-bench CSV is deterministic");
        check(b1.find("n,seed,backward_error,move_count,refine_count,iterations,error") != std::string::npos,
              "random-bench CSV header");
        int rows = 0;
        std::istringstream ss(b1);
        std::string line;
        while (std::getline(ss, line))
            if (!line.empty() && line[0] != '#' && line.rfind("n,", 0) != 0) ++rows;
        check(rows == 6, "random-bench row count = sizes x seeds");
    }

    // stress: runs and prints the summary table
    {
        const int rc = run(cli +
                           " stress --g-lo 1 --g-hi 1e15 --samples 200 --out cli_stress.csv"
                           " > cli_stdout.txt 2> cli_stderr.txt");
        check(rc == 0, "stress exits 0");
        const std::string out = slurp("cli_stdout.txt");
        check(out.find("IIo") != std::string::npos && out.find("IIe") != std::string::npos,
              "stress summary lists both move types");
        const std::string csv = slurp("cli_stress.csv");
        check(csv.find("kind,index,g,refinements,capped,error") != std::string::npos, "stress CSV header");
    }

    // alternating solve through the pair files
    {
        const auto P = cayley(gen_random_palindromic(8, 3));
        write_matrix("cli_alt_a.mtx", P.A);
        write_matrix("cli_alt_b.mtx", P.B);
        const int rc = run(cli +
                           " solve --structure alternating --in cli_alt_a.mtx --in-b cli_alt_b.mtx"
                           " --out cli_alt.csv --accumulate-q" + quiet);
        check(rc == 0, "alternating solve exits 0");
    }

    std::printf("%s\n", failures == 0 ? "cli_tests: all passed" : "cli_tests: FAILURES");
    return failures == 0 ? 0 : 1;
}
