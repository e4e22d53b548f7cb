// Command-line harness for the pole-swapping eigensolvers: solve a pencil
// from a Matrix Market file, run the random benchmark (backward error and
// move counts), or reproduce the middle-swap refinement stress table.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <poleswap/poleswap.hpp>

using namespace poleswap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitShape = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitOther = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(path + ": cannot open output file");
    out << text;
}

struct SolveArgs {
    std::string in, in_b, out;
    std::string structure = "palindromic";
    bool accumulate_q = false;
    double tol_factor = 10.0;
    int max_iter = 30;
    double guard_gap = 1e-3;
};

int cmd_solve(const SolveArgs& args) {
    StructuredPencil P;
    if (args.structure == "alternating") {
        if (args.in_b.empty())
            throw StructureError("alternating pencils need --in-b with the skew-Hermitian B");
        P = new_structured_pair(read_matrix(args.in), read_matrix(args.in_b));
    } else {
        P = new_structured(read_matrix(args.in), StructureKind::Palindromic);
    }
    SolverOptions opts;
    opts.accumulate_q = args.accumulate_q;
    opts.move_tolerance_factor = args.tol_factor;
    opts.max_iterations_per_deflation = args.max_iter;
    opts.shift_guard_gap = args.guard_gap;
    auto rep = solve(P, opts);
    if (rep.Q) rep.backward_error = backward_error(P.A, *rep.Q, rep.S_A);

    std::ostringstream csv;
    csv << "# poleswap-csv v1 solve\n";
    csv << "index,re,im,pair,infinite\n";
    for (size_t i = 0; i < rep.eigenvalues.size(); ++i) {
        const Complex v = rep.eigenvalues[i].is_infinite()
                              ? Complex(INFINITY, INFINITY)
                              : rep.eigenvalues[i].value();
        const bool finite = std::isfinite(v.real()) && std::isfinite(v.imag());
        csv << i << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << ','
            << rep.companion_index[i] << ',' << (finite ? 0 : 1) << '\n';
    }
    csv << "# summary\n";
    csv << "n,backward_error,move_count,refine_count,iterations\n";
    csv << P.n << ',' << (rep.Q ? fmt(rep.backward_error) : std::string()) << ','
        << rep.stats.total_moves() << ',' << rep.stats.refinements << ',' << rep.iterations << '\n';
    if (args.out.empty())
        std::cout << csv.str();
    else
        write_text(args.out, csv.str());
    return kExitOk;
}

struct BenchArgs {
    std::vector<long> sizes{100, 200};
    int seeds = 5;
    std::string structure = "palindromic";
    std::string out;
    double tol_factor = 10.0;
};

int cmd_random_bench(const BenchArgs& args) {
    std::ostringstream csv;
    csv << "# poleswap-csv v1 random-bench\n";
    csv << "n,seed,backward_error,move_count,refine_count,iterations,error\n";
    for (const long n : args.sizes) {
        for (int seed = 1; seed <= args.seeds; ++seed) {
            csv << n << ',' << seed << ',';
            try {
                auto base = gen_random_palindromic(n, static_cast<std::uint64_t>(seed));
                const StructuredPencil P =
                    args.structure == "alternating" ? cayley(base) : base;
                SolverOptions opts;
                opts.accumulate_q = true;
                opts.move_tolerance_factor = args.tol_factor;
                const auto rep = solve(P, opts);
                const double be = backward_error(P.A, *rep.Q, rep.S_A);
                csv << fmt(be) << ',' << rep.stats.total_moves() << ','
                    << rep.stats.refinements << ',' << rep.iterations << ",\n";
            } catch (const Error& e) {
                csv << ",,,," << e.what() << '\n';
            }
        }
    }
    if (args.out.empty())
        std::cout << csv.str();
    else
        write_text(args.out, csv.str());
    return kExitOk;
}

struct StressArgs {
    double g_lo = 1.0;
    double g_hi = 1e15;
    long samples = 10000;
    std::uint64_t seed = 12345;
    double tol_factor = 10.0;
    int max_refines = 10;
    std::string out;
};

struct StressTally {
    long attempted = 0;
    long refinements = 0;
    long max_refinements = 0;
    long capped = 0;
    long refused = 0;

    void account(long r) {
        ++attempted;
        refinements += r;
        max_refinements = std::max(max_refinements, r);
    }
};

int cmd_stress(const StressArgs& args) {
    if (!(args.g_lo > 0.0) || !(args.g_hi > args.g_lo))
        throw DomainError("stress: need 0 < --g-lo < --g-hi");
    std::ostringstream csv;
    csv << "# poleswap-csv v1 stress\n";
    csv << "kind,index,g,refinements,capped,error\n";
    Rng master(args.seed);
    const double llo = std::log10(args.g_lo), lhi = std::log10(args.g_hi);
    StressTally iio, iie;
    for (long i = 0; i < args.samples; ++i) {
        const double g = std::pow(10.0, llo + master.uniform() * (lhi - llo));
        const std::uint64_t s2 = args.seed + 1000003ull * static_cast<std::uint64_t>(i);
        {
            csv << "iio," << i << ',' << fmt(g) << ',';
            try {
                auto P = gen_stress_2x2(g, s2);
                const auto st = move_IIo(P, args.max_refines, {}, nullptr, args.tol_factor);
                iio.account(st.refinements);
                csv << st.refinements << ",0,\n";
            } catch (const RefinementLimitError& e) {
                ++iio.capped;
                csv << e.refinements << ",1,\n";
            } catch (const Error& e) {
                ++iio.refused;
                csv << ",," << e.what() << '\n';
            }
        }
        {
            csv << "iie," << i << ',' << fmt(g) << ',';
            try {
                auto P = gen_stress_3x3(g, s2 + 1);
                const auto st = move_IIe(P, args.max_refines, {}, nullptr, args.tol_factor);
                iie.account(st.refinements);
                csv << st.refinements << ",0,\n";
            } catch (const RefinementLimitError& e) {
                ++iie.capped;
                csv << e.refinements << ",1,\n";
            } catch (const Error& e) {
                ++iie.refused;
                csv << ",," << e.what() << '\n';
            }
        }
    }
    if (!args.out.empty()) write_text(args.out, csv.str());

    const auto avg = [](const StressTally& t) {
        return t.attempted + t.capped > 0
                   ? static_cast<double>(t.refinements + 10 * t.capped) / (t.attempted + t.capped)
                   : 0.0;
    };
    std::printf("g in [%.3g, %.3g], %ld samples per move type\n", args.g_lo, args.g_hi, args.samples);
    std::printf("%-4s %-10s %-6s %-7s %-8s\n", "move", "average", "max", "capped", "refused");
    std::printf("IIe  %-10.5g %-6ld %-7ld %-8ld\n", avg(iie),
                iie.capped > 0 ? 10l : iie.max_refinements, iie.capped, iie.refused);
    std::printf("IIo  %-10.5g %-6ld %-7ld %-8ld\n", avg(iio),
                iio.capped > 0 ? 10l : iio.max_refinements, iio.capped, iio.refused);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structure-preserving pole-swapping eigensolvers for palindromic and alternating pencils"};
    app.require_subcommand(1);

    SolveArgs sargs;
    auto* sc = app.add_subcommand("solve", "solve one pencil from a Matrix Market file");
    sc->add_option("--in", sargs.in, "input matrix A (Matrix Market array complex general)")->required();
    sc->add_option("--in-b", sargs.in_b, "input matrix B (required for --structure alternating)");
    sc->add_option("--structure", sargs.structure, "pencil structure")
        ->check(CLI::IsMember({"palindromic", "alternating"}));
    sc->add_option("--out", sargs.out, "output CSV path (stdout when omitted)");
    sc->add_flag("--accumulate-q", sargs.accumulate_q, "accumulate Q and report the backward error");
    sc->add_option("--tol-factor", sargs.tol_factor, "middle-swap tolerance factor f in f*eps*|M|_F");
    sc->add_option("--max-iter", sargs.max_iter, "sweeps per deflation before the stall policy kicks in");
    sc->add_option("--guard-gap", sargs.guard_gap, "shift guard distance from the unit circle / imaginary axis");

    BenchArgs bargs;
    auto* bc = app.add_subcommand("random-bench", "random anti-Hessenberg pencils: backward error and move counts");
    bc->add_option("--sizes", bargs.sizes, "matrix sizes")->delimiter(',');
    bc->add_option("--seeds", bargs.seeds, "number of seeds per size (1..N)");
    bc->add_option("--structure", bargs.structure, "pencil structure (alternating runs on Cayley transforms)")
        ->check(CLI::IsMember({"palindromic", "alternating"}));
    bc->add_option("--out", bargs.out, "output CSV path (stdout when omitted)");
    bc->add_option("--tol-factor", bargs.tol_factor, "middle-swap tolerance factor");

    StressArgs targs;
    auto* tc = app.add_subcommand("stress", "middle-swap refinement counts on 2x2/3x3 stress blocks");
    tc->add_option("--g-lo", targs.g_lo, "lower end of the eigenvalue-gap interval")->required();
    tc->add_option("--g-hi", targs.g_hi, "upper end of the eigenvalue-gap interval")->required();
    tc->add_option("--samples", targs.samples, "test matrices per interval and move type (paper used 1e5)");
    tc->add_option("--seed", targs.seed, "master seed");
    tc->add_option("--tol-factor", targs.tol_factor, "acceptance tolerance factor f in f*eps*|M|_F");
    tc->add_option("--max-refines", targs.max_refines, "refinement cap per swap");
    tc->add_option("--out", targs.out, "per-sample CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc->parsed()) return cmd_solve(sargs);
        if (bc->parsed()) return cmd_random_bench(bargs);
        if (tc->parsed()) return cmd_stress(targs);
    } catch (const ParseError& e) {
        std::cerr << "ParseError: " << e.what() << '\n';
        return kExitParse;
    } catch (const ShapeError& e) {
        std::cerr << "ShapeError: " << e.what() << '\n';
        return kExitShape;
    } catch (const StructureError& e) {
        std::cerr << "StructureError: " << e.what() << '\n';
        return kExitShape;
    } catch (const DimensionError& e) {
        std::cerr << "DimensionError: " << e.what() << '\n';
        return kExitShape;
    } catch (const ConvergenceError& e) {
        std::cerr << "ConvergenceError: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
    return kExitOk;
}
