#pragma once

// Command-line front end. run_cli returns the process exit status:
// 0 success, 1 domain error (message names the error case), 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "finring/bounds.hpp"
#include "finring/census.hpp"
#include "finring/flatten.hpp"
#include "finring/nilpotent.hpp"
#include "finring/regression.hpp"
#include "finring/structure.hpp"

namespace finring::cli {

namespace detail {

inline std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<FiniteRing> rings_in(const std::string& path) {
  std::istringstream in(slurp(path));
  return parse_rings(in);
}

inline FiniteRing one_ring(const std::string& path) {
  auto rs = rings_in(path);
  if (rs.size() != 1) throw Error(Errc::ParseError, path + ": expected one ring record, found " + std::to_string(rs.size()));
  return rs.front();
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string elements(const std::vector<RingElement>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + format_element(xs[i]);
  return s.empty() ? "-" : s;
}

inline std::string ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s.empty() ? "-" : s;
}

inline std::string fixed(double v, int digits = 10) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

/// Left-aligned columns separated by two spaces.
inline void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], r[c].size());
    }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
    }
    out << line << "\n";
  }
}

inline void print_profile(std::ostream& out, const FiltrationProfile& f) {
  print_table(out, {{"w", "r", "s", "t", "u", "m", "u_h", "d"},
                    {std::to_string(f.w), std::to_string(f.r), std::to_string(f.s), std::to_string(f.t), std::to_string(f.u),
                     std::to_string(f.m), ints(f.u_h), ints(f.d)}});
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace detail;
  CLI::App app{"Finite rings of prime-power order: validation, structure, census and counting bounds", "finring"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  std::function<void()> action;

  // ring-level commands
  std::string file, file2, elem_a, elem_b;
  auto* validate = app.add_subcommand("validate", "Validate ring records and print their basic flags");
  validate->add_option("file", file, "Ring records ('-' for stdin)")->required();
  validate->callback([&] {
    action = [&] {
      const auto rs = rings_in(file);
      for (std::size_t k = 0; k < rs.size(); ++k) {
        const auto& R = rs[k];
        const auto id = find_identity(R);
        out << "ring " << k + 1 << ": valid; p=" << R.p() << " shape=" << R.shape().to_string() << " order=" << R.order()
            << " commutative=" << yes_no(R.is_commutative()) << " nilpotent=" << yes_no(is_nilpotent(R).nilpotent)
            << " identity=" << (id ? format_element(*id) : "none") << "\n";
      }
      if (rs.empty()) throw Error(Errc::ParseError, file + ": no ring records");
    };
  });

  auto* mul = app.add_subcommand("mul", "Multiply two elements given by coordinates, e.g. 1,2");
  mul->add_option("file", file, "Ring record")->required();
  mul->add_option("a", elem_a, "Left factor")->required();
  mul->add_option("b", elem_b, "Right factor")->required();
  mul->callback([&] {
    action = [&] {
      const FiniteRing R = one_ring(file);
      out << format_element(R.mul(R.reduce(parse_element(elem_a)), R.reduce(parse_element(elem_b)))) << "\n";
    };
  });

  auto* flat = app.add_subcommand("flatten", "Print the flattened F_p table with its associativity verdict");
  flat->add_option("file", file, "Ring record")->required();
  flat->callback([&] {
    action = [&] {
      auto F = flatten(one_ring(file));
      check_associativity(F.table);
      out << format_fp_table(F.table);
    };
  });

  bool show_canonical = false;
  auto* iso = app.add_subcommand("iso", "Decide isomorphism of two rings (two files, or one file with two records)");
  iso->add_option("file", file, "Ring records")->required();
  iso->add_option("other", file2, "Second ring record");
  iso->add_flag("--canonical", show_canonical, "Also print both canonical forms");
  iso->callback([&] {
    action = [&] {
      std::vector<FiniteRing> rs = rings_in(file);
      if (!file2.empty()) rs.push_back(one_ring(file2));
      if (rs.size() != 2) throw Error(Errc::ParseError, "iso needs exactly two rings, got " + std::to_string(rs.size()));
      const auto w = find_isomorphism(rs[0], rs[1]);
      out << "isomorphic: " << yes_no(w.has_value()) << "\n";
      if (w) out << "basis images: " << elements(*w) << "\n";
      if (show_canonical)
        for (const auto& R : rs) out << format_ring(canonical_form(R));
    };
  });

  auto* radical = app.add_subcommand("radical", "Jacobson radical and the quotient R/J");
  radical->add_option("file", file, "Ring record")->required();
  radical->callback([&] {
    action = [&] {
      const FiniteRing R = one_ring(file);
      const SubgroupBasis J = jacobson_radical(R);
      out << "order: " << R.p() << "^" << J.order_exponent() << "\n";
      out << "generators: " << elements(J.generators()) << "\n";
      if (J.is_whole()) {
        out << "quotient: zero ring\n";
      } else {
        out << "quotient:\n" << format_ring(quotient_ring(R, J).ring);
      }
    };
  });

  auto* coeff = app.add_subcommand("coeff", "Coefficient subring of a non-nilpotent ring");
  coeff->add_option("file", file, "Ring record")->required();
  coeff->callback([&] {
    action = [&] {
      const FiniteRing R = one_ring(file);
      const auto C = coefficient_subring(R);
      const auto [d, theta] = identify_coefficient_ring(R, C.S);
      out << "descriptor: " << d.to_string() << "\n";
      out << "generators: " << elements(C.S.generators()) << "\n";
      out << "idempotent: " << format_element(C.report.idempotent_seed) << "\n";
      print_table(out, {{"S+J=R", "unital", "J(S)=pS", "S^J=pS", "minimal"},
                        {yes_no(C.report.sum_with_radical_is_ring), yes_no(C.report.unital), yes_no(C.report.radical_is_pS),
                         yes_no(C.report.meets_radical_in_pS), yes_no(C.report.minimal)}});
      if (!C.report.all()) throw Error(Errc::GenerationFailed, "coefficient subring properties fail");
    };
  });

  auto* sext = app.add_subcommand("sextuple", "Sextuple extraction and rebuild");
  auto* round = sext->add_subcommand("roundtrip", "Extract the sextuple, rebuild the ring and compare");
  sext->require_subcommand(1);
  round->add_option("file", file, "Ring record")->required();
  round->callback([&] {
    action = [&] {
      const FiniteRing R = one_ring(file);
      const Sextuple t = extract_sextuple(R);
      const FiniteRing T = build_from_sextuple(t);
      out << "descriptor: " << t.descriptor.to_string() << "\n";
      out << "radical shape: " << (t.J.rank() ? t.J.shape().to_string() : "-") << "\n";
      out << "rebuilt:\n" << format_ring(T);
      const bool same = is_isomorphic(T, R);
      out << "isomorphic: " << yes_no(same) << "\n";
      if (!same) throw Error(Errc::InvalidSextuple, "rebuilt ring is not isomorphic to the input");
    };
  });

  // nilpotent rings
  bool commutative = false;
  Int p = 2;
  int r = 1, n = 1;
  auto* nil = app.add_subcommand("nilpotent", "Invariants of the mod-p algebra of a nilpotent ring");
  nil->require_subcommand(1);
  auto* profile = nil->add_subcommand("profile", "Filtration profile of R/pR");
  profile->add_option("file", file, "Ring record")->required();
  profile->callback([&] { action = [&] { print_profile(out, filtration_profile(mod_p_algebra(one_ring(file)))); }; });
  auto* sims = nil->add_subcommand("sims", "Sims dimension of R/pR with a witnessing subspace");
  sims->add_option("file", file, "Ring record")->required();
  sims->callback([&] {
    action = [&] {
      const auto w = finring::sims_search(mod_p_algebra(one_ring(file)));
      out << "sims dimension: " << w.s << "\n";
      out << "witness: " << elements(w.xs) << "\n";
    };
  });
  auto* std_basis = nil->add_subcommand("stdbasis", "Standard basis of the cube-zero algebra R/pR");
  std_basis->add_option("file", file, "Ring record")->required();
  std_basis->add_flag("--commutative", commutative, "Use the commutative chain construction");
  std_basis->callback([&] {
    action = [&] {
      const FiniteRing A = mod_p_algebra(one_ring(file));
      const auto b = standard_basis(A, commutative);
      out << "r=" << b.r << " s=" << b.s << " t=" << b.t << "\n";
      out << "x: " << elements(b.xs) << "\n";
      out << "y: " << elements(b.ys) << "\n";
      for (std::size_t j = 0; j < b.monomial_reps.size(); ++j)
        out << "y" << j + 1 << " = x" << b.monomial_reps[j].first + 1 << " x" << b.monomial_reps[j].second + 1 << "\n";
      if (commutative) out << "q: " << ints(b.q) << "\n";
      out << "valid: " << yes_no(standard_basis_valid(A, b)) << "\n";
    };
  });
  bool print_classes = false;
  auto* family = nil->add_subcommand("family", "Quotients of the free cube-zero algebra of rank r with dimension n");
  family->add_option("--p", p, "Prime")->default_val(2);
  family->add_option("--r", r, "Rank")->required()->check(CLI::PositiveNumber);
  family->add_option("--n", n, "Quotient dimension")->required()->check(CLI::PositiveNumber);
  family->add_flag("--commutative", commutative, "Commutative free algebra");
  family->add_flag("--print", print_classes, "Print each class");
  family->callback([&] {
    action = [&] {
      if (!is_prime(p)) throw Error(Errc::ParameterOutOfRange, "p must be prime");
      const auto f = lower_bound_family(p, r, n, commutative);
      out << "subspaces: " << f.subspace_count << "\n";
      out << "classes: " << f.classes.size() << "\n";
      if (print_classes)
        for (const auto& A : f.classes) out << format_ring(A);
    };
  });

  // census
  std::vector<std::string> filters;
  std::string out_path, strategy = "pruned";
  Int budget = 0;
  auto* census = app.add_subcommand("census", "Rings of order p^n up to isomorphism");
  census->add_option("--p", p, "Prime")->required();
  census->add_option("--n", n, "Exponent")->required();
  census->add_option("--filter", filters, "nilpotent, commutative, unital (prefix ! to negate) or shape=k1,k2,...");
  census->add_option("--out", out_path, "Write the census file here ('-' for stdout)");
  census->add_option("--strategy", strategy, "naive, pruned or both")->check(CLI::IsMember({"naive", "pruned", "both"}));
  census->add_option("--budget", budget, "Largest p^n to enumerate (default FINRING_BUDGET or 64)")->check(CLI::PositiveNumber);
  census->callback([&] {
    action = [&] {
      CensusFilter f;
      for (const auto& t : filters) f.add(t);
      const Int lim = budget > 0 ? budget : census_budget();
      std::vector<CensusRecord> recs;
      std::ostream& info = out_path == "-" ? err : out;  // keep stdout a valid census file
      if (strategy == "both") {
        const auto a = enumerate_rings(p, n, f, CensusStrategy::Naive, lim);
        recs = enumerate_rings(p, n, f, CensusStrategy::Pruned, lim);
        bool agree = a.size() == recs.size();
        for (std::size_t i = 0; agree && i < a.size(); ++i) agree = a[i].ring == recs[i].ring;
        info << "naive: " << a.size() << "\npruned: " << recs.size() << "\nstrategies agree: " << yes_no(agree) << "\n";
        if (!agree) throw Error(Errc::GenerationFailed, "naive and pruned censuses differ");
      } else {
        recs = enumerate_rings(p, n, f, strategy == "naive" ? CensusStrategy::Naive : CensusStrategy::Pruned, lim);
      }
      const auto st = census_statistics(recs);
      info << "census p=" << p << " n=" << n << ": " << st.total << " classes\n";
      std::vector<std::vector<std::string>> rows{{"nilpotent", std::to_string(st.nilpotent)},
                                                 {"commutative", std::to_string(st.commutative)},
                                                 {"unital", std::to_string(st.unital)}};
      for (const auto& [s, c] : st.quotient_at_least) rows.push_back({"|R/J|>=p^" + std::to_string(s), std::to_string(c)});
      for (const auto& [sh, c] : st.by_shape) rows.push_back({"shape " + sh, std::to_string(c)});
      print_table(info, rows);
      if (out_path == "-")
        out << format_census(p, n, recs);
      else if (!out_path.empty())
        write_census(out_path, p, n, recs);
    };
  });

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Counting exponents and objective maxima");
  bounds->require_subcommand(1);
  std::string variant;
  auto* objective = bounds->add_subcommand("objective", "Maximise a normalised cubic objective");
  objective->add_option("--variant", variant, "NC-low, NC-high, C-low or C-high (default: all)");
  objective->callback([&] {
    action = [&] {
      std::vector<ObjectiveVariant> vs{ObjectiveVariant::NCLow, ObjectiveVariant::NCHigh, ObjectiveVariant::CLow, ObjectiveVariant::CHigh};
      if (!variant.empty()) vs = {parse_objective_variant(variant)};
      std::vector<std::vector<std::string>> rows{{"variant", "max", "x", "y", "z", "v", "upper", "certified", "boxes"}};
      for (auto v : vs) {
        const auto m = delta_objective_max(v);
        rows.push_back({to_string(v), fixed(m.value), fixed(m.argmax[0], 6), fixed(m.argmax[1], 6), fixed(m.argmax[2], 6),
                        fixed(m.argmax[3], 6), fixed(m.certified_upper), yes_no(m.certified), std::to_string(m.boxes)});
      }
      print_table(out, rows);
    };
  });
  int s = 0, t = 0;
  auto* alpha = bounds->add_subcommand("alpha", "Exponent bound for cube-zero algebras with profile (r, s, t)");
  alpha->add_option("--r", r, "dim R/R^2")->required();
  alpha->add_option("--s", s, "Sims dimension")->required();
  alpha->add_option("--t", t, "dim R^2")->required();
  alpha->add_flag("--commutative", commutative, "Commutative count");
  alpha->callback([&] {
    action = [&] {
      const auto a = alpha_upper({r, s, t, 2, commutative});
      print_table(out, {{"r", "s", "t", "branch", "f", "g", "d", "alpha"},
                        {std::to_string(r), std::to_string(s), std::to_string(t), a.branch == AlphaBranch::LargeS ? "large-s" : "small-s",
                         std::to_string(a.f), std::to_string(a.g), std::to_string(a.d), std::to_string(a.value)}});
    };
  });
  auto* fb = bounds->add_subcommand("f-bounds", "Exponent bounds for commutative cube-zero algebras of dimension n, rank r");
  fb->add_option("--n", n, "Dimension")->required();
  fb->add_option("--r", r, "dim R/R^2")->required();
  fb->add_option("--p", p, "Prime")->default_val(2);
  fb->callback([&] {
    action = [&] {
      const auto b = commutative_f_bounds(n, r, p);
      print_table(out, {{"n", "r", "zero", "lower", "upper"},
                        {std::to_string(n), std::to_string(r), yes_no(b.zero), b.zero ? "-" : std::to_string(b.lower),
                         b.zero ? "-" : std::to_string(b.upper)}});
    };
  });
  std::vector<int> ns;
  auto* disc = bounds->add_subcommand("discrete", "Exact maximum of the pre-asymptotic exponent over integer profiles");
  disc->add_option("--n", ns, "Orders (repeatable)")->required()->check(CLI::PositiveNumber);
  disc->add_flag("--commutative", commutative, "Commutative expression");
  disc->callback([&] {
    action = [&] {
      std::vector<std::vector<std::string>> rows{{"n", "delta", "delta/n^3", "r", "s", "t", "w"}};
      for (int k : ns) {
        const auto d = discrete_delta_max(k, commutative);
        rows.push_back({std::to_string(k), fixed(d.delta, 1), fixed(d.normalized, 6), std::to_string(d.r), std::to_string(d.s),
                        std::to_string(d.t), std::to_string(d.w)});
      }
      print_table(out, rows);
    };
  });
  int gt = 0, gd = 0;
  auto* gauss = bounds->add_subcommand("gaussian", "Number of d-dimensional subspaces of F_p^t");
  gauss->add_option("--t", gt, "Ambient dimension")->required();
  gauss->add_option("--d", gd, "Subspace dimension")->required();
  gauss->add_option("--p", p, "Prime")->default_val(2);
  gauss->callback([&] {
    action = [&] {
      const auto g = gaussian_binomial(gt, gd, p);
      out << g.value << "\n";
    };
  });

  auto* ex = app.add_subcommand("examples", "Run the worked-example regression checks");
  ex->callback([&] {
    action = [&] {
      const auto checks = worked_example_checks();
      std::vector<std::vector<std::string>> rows{{"#", "check", "result", "detail"}};
      std::size_t passed = 0;
      for (std::size_t i = 0; i < checks.size(); ++i) {
        passed += checks[i].passed;
        rows.push_back({std::to_string(i + 1), checks[i].name, checks[i].passed ? "pass" : "FAIL", checks[i].detail});
      }
      print_table(out, rows);
      out << passed << "/" << checks.size() << " checks pass\n";
      if (passed != checks.size()) throw Error(Errc::GenerationFailed, "worked-example regression failed");
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }
  try {
    if (action) action();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace finring::cli
