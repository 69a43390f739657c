#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cph/cph_string.hpp"
#include "cph/cph_trie.hpp"
#include "cph/encodings.hpp"
#include "cph/index_io.hpp"
#include "cph/matching.hpp"
#include "cph/oracle.hpp"

namespace {

using namespace cph;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // mismatch, bad data, unreadable input
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

Sequence parse_ints(const std::string& text) {
    Sequence s;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(tok, &used);
            if (used != tok.size() || v > 0xFFFFFFFFull) throw std::invalid_argument("");
            s.push_back(static_cast<Character>(v));
        } catch (...) {
            throw std::runtime_error("not a non-negative integer: '" + tok + "'");
        }
    }
    return s;
}

Sequence read_sequence(const std::string& path, const std::string& format) {
    const std::string text = read_file(path);
    if (format == "bytes") {
        Sequence s;
        s.reserve(text.size());
        for (const unsigned char c : text) s.push_back(c);
        return s;
    }
    return parse_ints(text);
}

std::string join(const std::vector<std::uint32_t>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
    return out.str();
}

void print_string_build_stats(const Cph& cph) {
    std::cerr << "nodes=" << cph.nodes.size() << " height=" << cph.height
              << " sigma=" << cph.sigma << " climb_steps=" << cph.stats.climb_steps
              << " bound_3n=" << 3 * cph.n()
              << (cph.stats.climb_steps <= 3 * cph.n() ? " ok" : " VIOLATED") << "\n";
}

int cmd_build_string(const std::string& input, const std::string& format,
                     const std::string& output) {
    const Sequence s = read_sequence(input, format);
    if (s.empty()) {
        std::cerr << "error: empty text\n";
        return kExitFailure;
    }
    const Cph cph = make_string_index(s);
    print_string_build_stats(cph);
    write_file(output, serialize_string_index(cph));
    return kExitOk;
}

int cmd_build_trie(const std::string& input, const std::string& output) {
    TrieParseResult parsed = parse_trie(read_file(input));
    TrieIndex idx = make_trie_index(std::move(parsed.trie));
    std::cerr << "trie_nodes=" << idx.trie.size() << " fp_nodes=" << idx.fp.size()
              << " heap_nodes=" << idx.heap.nodes.size() << " height=" << idx.heap.height
              << " sigma=" << idx.trie.sigma()
              << " descents=" << idx.heap.stats.descent_steps
              << " unlinked=" << idx.heap.stats.missing_vhat << "\n";
    write_file(output, serialize_trie_index(idx));
    std::ostringstream map;
    for (const auto& [ext, canon] : parsed.id_map) map << ext << ' ' << canon << "\n";
    write_file(output + ".idmap", map.str());
    return kExitOk;
}

int cmd_query(const std::string& index_path, const std::string& pattern,
              const std::string& patterns_file) {
    const LoadedIndex idx = load_index(read_file(index_path));
    std::vector<std::string> lines;
    if (!pattern.empty()) lines.push_back(pattern);
    if (!patterns_file.empty()) {
        std::istringstream in(read_file(patterns_file));
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);
    }
    if (lines.empty()) {
        std::cerr << "error: no pattern given\n";
        return kExitFailure;
    }
    for (const std::string& line : lines) {
        const Sequence p = parse_ints(line);
        if (p.empty()) {
            std::cerr << "error: empty pattern\n";
            return kExitFailure;
        }
        std::vector<std::uint32_t> occ;
        if (std::holds_alternative<Cph>(idx)) occ = query_string(std::get<Cph>(idx), p);
        else occ = query_trie(std::get<TrieIndex>(idx), p);
        std::cout << join(occ) << "\n";
    }
    return kExitOk;
}

std::vector<std::uint32_t> parse_u32_list(const std::string& csv) {
    std::vector<std::uint32_t> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    if (out.empty()) throw std::runtime_error("empty list: '" + csv + "'");
    return out;
}

void print_sequence(std::ostream& out, const Sequence& s) {
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << s[i];
    out << "\n";
}

int cmd_verify(const std::string& kind, std::uint32_t cases, std::uint32_t max_n,
               const std::string& sigma_csv, std::uint64_t seed, std::uint32_t max_m,
               bool inject_fault) {
    const std::vector<std::uint32_t> sigmas = parse_u32_list(sigma_csv);
    std::mt19937_64 rng(seed);
    std::uint32_t agree = 0;
    for (std::uint32_t c = 0; c < cases; ++c) {
        // sizes ramp up so the first reported failure is a small instance
        const std::uint32_t n =
            std::max<std::uint32_t>(1, static_cast<std::uint32_t>(
                                           (static_cast<std::uint64_t>(c) + 1) * max_n / cases));
        const std::uint32_t sigma = sigmas[c % sigmas.size()];
        const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng() % max_m);
        Sequence p(m);
        for (auto& x : p) x = 1 + static_cast<std::uint32_t>(rng() % sigma);

        std::vector<std::uint32_t> got, want;
        std::string instance;
        if (kind == "string") {
            GenSpec spec{rng(), n, sigma, GenFamily::UniformRandom};
            const Sequence s = generate_sequence(spec);
            Cph idx = make_string_index(s);
            if (inject_fault && idx.n() >= 2) {
                // test hook: corrupt one maximal reach pointer
                idx.nodes[idx.pos_to_node[1]].mrp = 0;
            }
            got = query_string(idx, p);
            want = brute_match_string(s, p);
            std::ostringstream os;
            os << "text: ";
            print_sequence(os, s);
            instance = os.str();
        } else {
            GenSpec spec{rng(), std::max<std::uint32_t>(n, 2), sigma, GenFamily::RandomTrie};
            ReversedTrie t = generate_trie(spec);
            TrieIndex idx = make_trie_index(std::move(t));
            if (inject_fault && idx.fp.size() >= 2) {
                idx.heap.nodes[idx.heap.node_of_fp[idx.fp.size()]].mrp = 0;
            }
            got = query_trie(idx, p);
            want = brute_match_trie(idx.trie, p);
            std::ostringstream os;
            os << "trie nodes (id parent label):\n";
            for (std::uint32_t x = 1; x <= idx.trie.size(); ++x) {
                os << x << ' ' << idx.trie.nodes[x].parent << ' ';
                if (x == idx.trie.root) os << "-";
                else os << idx.trie.nodes[x].label;
                os << "\n";
            }
            instance = os.str();
        }
        if (got == want) {
            ++agree;
        } else {
            std::cout << "case " << c << ": MISMATCH\n" << instance << "pattern: ";
            print_sequence(std::cout, p);
            std::cout << "index:  " << join(got) << "\noracle: " << join(want) << "\n";
            std::cout << agree << "/" << cases << " agreed before first failure\n";
            return kExitFailure;
        }
    }
    std::cout << agree << "/" << cases << " agree\n";
    return kExitOk;
}

int cmd_bench(const std::string& n_csv, const std::string& sigma_csv, std::uint64_t seed,
              std::uint32_t repeats) {
    using Clock = std::chrono::steady_clock;
    const auto ns = parse_u32_list(n_csv);
    const auto sigmas = parse_u32_list(sigma_csv);
    bool all_ok = true;
    std::cout << std::left << std::setw(10) << "n" << std::setw(8) << "sigma" << std::setw(12)
              << "build_ms" << std::setw(14) << "climb_steps" << std::setw(10) << "climb/n"
              << std::setw(12) << "queries/s" << "bound\n";
    for (const std::uint32_t n : ns) {
        for (const std::uint32_t sigma : sigmas) {
            double best_ms = 0;
            std::uint64_t climb = 0;
            double qps = 0;
            for (std::uint32_t r = 0; r < repeats; ++r) {
                GenSpec spec{seed + r, n, sigma, GenFamily::UniformRandom};
                const Sequence s = generate_sequence(spec);
                const auto t0 = Clock::now();
                Cph idx = make_string_index(s);
                const auto t1 = Clock::now();
                const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                if (r == 0 || ms < best_ms) best_ms = ms;
                climb = idx.stats.climb_steps;

                std::mt19937_64 qrng(seed + r);
                const std::uint32_t nq = 200;
                const auto q0 = Clock::now();
                for (std::uint32_t q = 0; q < nq; ++q) {
                    const std::uint32_t m =
                        2 + static_cast<std::uint32_t>(qrng() % std::min<std::uint32_t>(14, n));
                    const std::uint32_t start =
                        1 + static_cast<std::uint32_t>(qrng() % std::max<std::uint32_t>(1, n - m + 1));
                    Sequence p(s.begin() + start - 1,
                               s.begin() + std::min<std::size_t>(start - 1 + m, s.size()));
                    if (p.empty()) p.push_back(1);
                    volatile std::size_t sink = query_string(idx, p).size();
                    (void)sink;
                }
                const auto q1 = Clock::now();
                qps = nq / std::chrono::duration<double>(q1 - q0).count();
            }
            const double ratio = static_cast<double>(climb) / n;
            const bool ok = climb <= 3ull * n;
            all_ok = all_ok && ok;
            std::cout << std::left << std::setw(10) << n << std::setw(8) << sigma
                      << std::setw(12) << std::fixed << std::setprecision(2) << best_ms
                      << std::setw(14) << climb << std::setw(10) << std::setprecision(3)
                      << ratio << std::setw(12) << std::setprecision(0) << qps
                      << (ok ? "<=3n ok" : "VIOLATED") << "\n";
        }
    }
    return all_ok ? kExitOk : kExitFailure;
}

int cmd_encode(bool pd, bool fp, bool dag, const std::string& input,
               const std::string& format) {
    const Sequence s = read_sequence(input, format);
    if (pd) {
        const PdSequence enc = pd_encode(s);
        if (!enc.empty()) std::cout << join(enc.values) << "\n";
    } else if (fp) {
        const FpSequence enc = fp_encode(s);
        if (!enc.empty()) std::cout << join(enc.values) << "\n";
    } else if (dag) {
        for (const auto& [j, i] : dag_from_pd(pd_encode(s)).edges)
            std::cout << j << ' ' << i << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cartesian-tree position heap indexing"};
    app.require_subcommand(1);

    std::string input, output, format = "ints", index_path, pattern, patterns_file;
    std::string kind = "string", sigma_csv = "2,3,4", n_csv = "1000";
    std::uint32_t cases = 100, max_n = 128, max_m = 16, repeats = 3;
    std::uint64_t seed = 1;
    bool inject_fault = false, enc_pd = false, enc_fp = false, enc_dag = false;

    auto* build_string = app.add_subcommand("build-string", "build a string index");
    build_string->add_option("--input", input)->required();
    build_string->add_option("--format", format)->check(CLI::IsMember({"ints", "bytes"}));
    build_string->add_option("--output", output)->required();

    auto* build_trie = app.add_subcommand("build-trie", "build a trie index");
    build_trie->add_option("--input", input)->required();
    build_trie->add_option("--output", output)->required();

    auto* query = app.add_subcommand("query", "report occurrences per pattern");
    query->add_option("--index", index_path)->required();
    query->add_option("--pattern", pattern);
    query->add_option("--patterns", patterns_file);

    auto* verify = app.add_subcommand("verify", "compare index answers to brute force");
    verify->add_option("--kind", kind)->check(CLI::IsMember({"string", "trie"}));
    verify->add_option("--cases", cases);
    verify->add_option("--max-n", max_n);
    verify->add_option("--max-m", max_m);
    verify->add_option("--sigma", sigma_csv);
    verify->add_option("--seed", seed);
    verify->add_flag("--inject-fault", inject_fault)->group("");  // test hook

    auto* bench = app.add_subcommand("bench", "construction and query timings");
    bench->add_option("--n", n_csv);
    bench->add_option("--sigma", sigma_csv);
    bench->add_option("--seed", seed);
    bench->add_option("--repeats", repeats);

    auto* encode = app.add_subcommand("encode", "print an encoding of the input");
    encode->add_flag("--pd", enc_pd);
    encode->add_flag("--fp", enc_fp);
    encode->add_flag("--dag", enc_dag);
    encode->add_option("--input", input)->required();
    encode->add_option("--format", format)->check(CLI::IsMember({"ints", "bytes"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (build_string->parsed()) return cmd_build_string(input, format, output);
        if (build_trie->parsed()) return cmd_build_trie(input, output);
        if (query->parsed()) return cmd_query(index_path, pattern, patterns_file);
        if (verify->parsed())
            return cmd_verify(kind, cases, max_n, sigma_csv, seed, max_m, inject_fault);
        if (bench->parsed()) return cmd_bench(n_csv, sigma_csv, seed, repeats);
        if (encode->parsed()) {
            if (static_cast<int>(enc_pd) + static_cast<int>(enc_fp) +
                    static_cast<int>(enc_dag) != 1) {
                std::cerr << "error: pick exactly one of --pd, --fp, --dag\n";
                return kExitUsage;
            }
            return cmd_encode(enc_pd, enc_fp, enc_dag, input, format);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
