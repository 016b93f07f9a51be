#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "ttlab/io.hpp"

using namespace ttlab;

namespace {

constexpr int kOk = 0, kInvalid = 2, kCap = 3, kParse = 4;

// A closed triangulation from either document kind.
Triangulation3D load_triangulation(const std::string& text) {
  if (is_triangulation_json(text)) return triangulation_from_json(text);
  return triple_to_triangulation(triple_from_json(text));
}

std::pair<int, int> parse_window(const std::string& s) {
  int a = 0, b = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d,%d%c", &a, &b, &tail) != 2) {
    throw Error(ErrorCode::Parse, "window must read a,b");
  }
  return {a, b};
}

struct EnumerateArgs {
  int n = 0, max_n = 0, jobs = 1;
  bool extended = false, progress = false;
  std::string out = "-";
};

int run_enumerate(const EnumerateArgs& a) {
  EnumerationOptions opts;
  opts.extended = a.extended;
  opts.jobs = a.jobs;
  if (a.progress) {
    opts.progress = [](std::int64_t done, std::int64_t total) {
      std::cerr << "\r" << done << "/" << total << std::flush;
      if (done == total) std::cerr << "\n";
    };
  }
  std::vector<EnumerationReport> reports;
  for (int n = a.n; n <= std::max(a.n, a.max_n); ++n) reports.push_back(enumerate_Mn(n, opts));
  write_text(a.out, coefficients_csv(reports));
  return kOk;
}

struct SeriesArgs {
  std::string family;
  int order = 0, jobs = 1;
  std::string out = "-";
};

int run_series(const SeriesArgs& a) {
  TruncatedSeries s(a.order);
  if (a.family == "H") {
    s = h_series(a.order);
  } else if (a.family == "A") {
    s = apollonian_series(a.order).a;
  } else {
    // M(z, 1) needs the exact enumeration of every size.
    EnumerationOptions opts;
    opts.jobs = a.jobs;
    for (int n = 2; n <= a.order; ++n) s[n] = enumerate_Mn(n, opts).total();
  }
  write_text(a.out, series_csv(s, a.order, a.family));
  return kOk;
}

int run_verify(const std::string& input) {
  const std::string text = read_text(input);
  std::string out = csv_preamble();
  int code = kOk;
  if (is_triangulation_json(text)) {
    const Triangulation3D T = triangulation_from_json(text);
    const MembershipReport r = verify_membership(T);
    if (r.ok()) {
      out += "OK\n";
    } else {
      out += std::string("FAIL ") + to_string(r.issue) + ": " + r.detail + "\n";
      code = kInvalid;
    }
    out += "# tetrahedra=" + std::to_string(T.num_tetrahedra()) + "\n";
    if (r.ok()) out += "# n=" + std::to_string(T.num_tetrahedra() + 2) + "\n";
  } else {
    try {
      const TripleTree tt = triple_from_json(text);
      out += "OK\n# n=" + std::to_string(tt.n()) + "\n# loops=" + std::to_string(tt.loops) + "\n";
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Parse) throw;
      out += std::string("FAIL ") + e.what() + "\n";
      code = kInvalid;
    }
  }
  write_text("-", out);
  return code;
}

int run_build3d(const std::string& input, const std::string& output) {
  const TripleTree tt = triple_from_json(read_text(input));
  const Triangulation3D T = triple_to_triangulation(tt);
  const MembershipReport r = verify_membership(T);
  if (!r.ok()) throw Error(ErrorCode::InvariantViolation, std::string("built triangulation fails: ") + to_string(r.issue));
  write_text(output, triangulation_to_json(T));
  return kOk;
}

struct CertifyArgs {
  std::string input = "-", out = "-", order = "lowest";
  std::uint64_t seed = 0;
};

int run_certify(const CertifyArgs& a) {
  const Triangulation3D T = load_triangulation(read_text(a.input));
  if (const MembershipReport r = verify_membership(T); !r.ok()) {
    std::cerr << "not a member: " << to_string(r.issue) << ": " << r.detail << "\n";
    return kInvalid;
  }
  const PeelOrder order = a.order == "highest" ? PeelOrder::Highest
                          : a.order == "random" ? PeelOrder::Random
                                                : PeelOrder::Lowest;
  const auto lc = find_tree_avoiding_lc(T, order, a.seed);
  if (!lc) {
    std::cerr << "no tree-avoiding local construction found\n";
    return kInvalid;
  }
  const LcReplay replay = run_local_construction(*lc);
  if (!replay || replay.T->canonical_code() != T.canonical_code()) {
    throw Error(ErrorCode::InvariantViolation, "certificate does not replay to the input");
  }
  const DiscreteVectorField field = morse_from_lc(*lc);
  if (!is_valid_field(T, field) || !is_acyclic(T, field)) {
    throw Error(ErrorCode::InvariantViolation, "gradient is not an acyclic matching");
  }
  write_text(a.out, certify_to_json(*lc, field));
  std::cerr << "steps=" << lc->steps.size() << " critical=" << field.critical[0].size() << ","
            << field.critical[1].size() << "," << field.critical[2].size() << "," << field.critical[3].size()
            << "\n";
  return kOk;
}

struct SampleArgs {
  double x = 1;
  std::optional<double> z;
  std::string window;
  std::int64_t steps = 1'000'000;
  std::optional<std::int64_t> tuning, thinning;
  std::optional<std::uint64_t> seed;
  int jobs = 1, chains = 1;
  bool compare = false;
  std::string out = "-", summary;
};

int run_sample(const SampleArgs& a) {
  ChainConfig c;
  c.x = a.x;
  c.z = a.z;
  std::tie(c.n_min, c.n_max) = parse_window(a.window);
  c.steps = a.steps;
  c.tuning_steps = a.tuning.value_or(a.steps);
  c.thinning = a.thinning.value_or(0);
  // An unseeded run draws its seed once; every artifact records it.
  c.seed = a.seed ? *a.seed : (static_cast<std::uint64_t>(std::random_device{}()) << 32) | std::random_device{}();
  const ChainResult r = a.chains > 1 ? run_chains(c, a.chains, a.jobs) : run_chain(c);
  write_text(a.out, histogram_csv(r));
  std::optional<ExactComparison> exact;
  if (a.compare) {
    const auto table = exact_table(c.n_min, c.n_max, a.jobs);
    exact = ExactComparison{exact_ratios(table, c.x), chi_square(r, table)};
  }
  if (!a.summary.empty()) write_text(a.summary, summary_json(r, exact));
  std::cerr << "seed=" << c.seed << " thinning=" << r.thinning << " seconds=" << r.seconds << "\n";
  if (exact) {
    for (const auto& [n, e] : r.ratio) {
      if (!exact->ratio.count(n)) continue;
      const double want = exact->ratio.at(n);
      std::cerr << "ratio n=" << n << " sampled=" << e.value << "+-" << e.error << " exact=" << want
                << " rel=" << (e.value - want) / want << "\n";
    }
    std::cerr << "chi2=" << exact->chi.statistic << " dof=" << exact->chi.dof << " p=" << exact->chi.p_value << "\n";
  }
  return kOk;
}

int run_catalog(int n, const std::string& out) {
  if (n > 7) throw Error(ErrorCode::Cap, "catalog is capped at size 7");
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "size must be at least 2");
  write_text(out, catalog_csv(n, enumerate_triple_trees(n)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triple trees, decorated 3-spheres and their enumeration"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kFormat));

  EnumerateArgs en;
  auto* enumerate = app.add_subcommand("enumerate", "Coefficients of M_n(x) by exhaustive enumeration");
  enumerate->add_option("--n", en.n, "Size")->required()->check(CLI::Range(2, 8));
  enumerate->add_option("--max-n", en.max_n, "Enumerate sizes n..max-n")->check(CLI::Range(2, 8));
  enumerate->add_flag("--extended", en.extended, "Allow size 8 (long)");
  enumerate->add_option("--jobs", en.jobs, "Worker threads")->check(CLI::Range(1, 256));
  enumerate->add_flag("--progress", en.progress, "Report progress on stderr");
  enumerate->add_option("--out", en.out, "CSV output, - for stdout");

  SeriesArgs se;
  auto* series = app.add_subcommand("series", "Generating function coefficients");
  series->add_option("--family", se.family, "H, A or M")->required()->check(CLI::IsMember({"H", "A", "M"}));
  series->add_option("--order", se.order, "Highest power of z")->required()->check(CLI::Range(1, 2000));
  series->add_option("--jobs", se.jobs, "Worker threads for M")->check(CLI::Range(1, 256));
  series->add_option("--out", se.out, "CSV output, - for stdout");

  std::string verify_input = "-";
  auto* verify = app.add_subcommand("verify", "Membership verdict for a triangulation or triple tree");
  verify->add_option("--input", verify_input, "JSON input, - for stdin");

  std::string b_in = "-", b_out = "-";
  auto* build3d = app.add_subcommand("build3d", "Decorated 3-sphere of a triple tree");
  build3d->add_option("--input", b_in, "Triple tree JSON, - for stdin");
  build3d->add_option("--out", b_out, "Face-gluing JSON, - for stdout");

  CertifyArgs ce;
  auto* certify = app.add_subcommand("certify", "Tree-avoiding local construction and discrete gradient");
  certify->add_option("--input", ce.input, "Triangulation or triple tree JSON, - for stdin");
  certify->add_option("--out", ce.out, "Certificate JSON, - for stdout");
  certify->add_option("--order", ce.order, "Free-edge order")->check(CLI::IsMember({"lowest", "highest", "random"}));
  certify->add_option("--seed", ce.seed, "Seed for the random order");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Markov chain over triple trees");
  sample->add_option("--x", sa.x, "Weight per loop")->check(CLI::PositiveNumber);
  sample->add_option("--z", sa.z, "Fixed weight per unit size; flat-histogram weights otherwise")
      ->check(CLI::PositiveNumber);
  sample->add_option("--window", sa.window, "Size window a,b")->required();
  sample->add_option("--steps", sa.steps, "Production steps")->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  sample->add_option("--tuning", sa.tuning, "Tuning steps (default: --steps)");
  sample->add_option("--thinning", sa.thinning, "Thinning (default: five autocorrelation times)");
  sample->add_option("--seed", sa.seed, "Seed (default: drawn and recorded)");
  sample->add_option("--jobs", sa.jobs, "Worker threads")->check(CLI::Range(1, 256));
  sample->add_option("--chains", sa.chains, "Independent chains, merged")->check(CLI::Range(1, 1024));
  sample->add_flag("--compare", sa.compare, "Compare against exact enumeration (window up to 7)");
  sample->add_option("--out", sa.out, "Histogram CSV, - for stdout");
  sample->add_option("--summary", sa.summary, "Summary JSON file");

  int catalog_n = 0;
  std::string catalog_out = "-";
  auto* catalog = app.add_subcommand("catalog", "Every triple tree of one size with its loop count");
  catalog->add_option("--n", catalog_n, "Size")->required();
  catalog->add_option("--out", catalog_out, "CSV output, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*enumerate) return run_enumerate(en);
    if (*series) return run_series(se);
    if (*verify) return run_verify(verify_input);
    if (*build3d) return run_build3d(b_in, b_out);
    if (*certify) return run_certify(ce);
    if (*sample) return run_sample(sa);
    if (*catalog) return run_catalog(catalog_n, catalog_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::Parse: return kParse;
      case ErrorCode::Cap: return kCap;
      default: return kInvalid;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
