#include <doctest.h>

#include <praag/errors.hpp>
#include <praag/presentation.hpp>

#include <random>

#include "test_util.hpp"

using namespace praag;
using namespace praag::testutil;

TEST_CASE("p-RAAG presentations drop exact-zero powers") {
  auto g = pg("pgraph v1\nvertices x y\nedge x y 0 -5\n");
  auto pr = praag_presentation(g);
  CHECK(pr.d() == 2);
  REQUIRE(pr.r() == 1);
  REQUIRE(pr.relators[0].factors.size() == 2); // commutator and one power
  CHECK(std::holds_alternative<Commutator>(pr.relators[0].factors[0]));
  const auto& pw = std::get<Power>(pr.relators[0].factors[1]);
  CHECK(pw.i == 1);
  CHECK(pw.e.exact_value() == 5); // relator [x,y] x^{-f1} y^{-f2}

  auto zero = pg("pgraph v1\nvertices x y\nedge x y 0 0\n");
  auto prz = praag_presentation(zero);
  CHECK(prz.relators[0].factors.size() == 1);

  auto both = pg("pgraph v1\nvertices x y\nedge x y 25 -5\n");
  CHECK(praag_presentation(both).relators[0].factors.size() == 3);

  CHECK_NOTHROW(pr.validate());
}

TEST_CASE("relator text round-trips") {
  std::vector<std::string> gens = {"x1", "x2"};
  auto r = parse_relator("[x1,x2] x2^-5", gens, 5, 4);
  CHECK(relator_to_string(r, gens) == "[x1,x2] x2^-5");
  CHECK(relator_to_string(parse_relator("x2^25~", gens, 5, 4), gens) == "x2^25~");
  CHECK_THROWS_AS(parse_relator("x1^3", gens, 5, 4), ValidationError);
  CHECK_THROWS_AS(parse_relator("[x1,x3]", gens, 5, 4), ValidationError);
  CHECK_THROWS_AS(parse_relator("[x1,x1]", gens, 5, 4), ValidationError);
}

TEST_CASE("pair indexing round-trips") {
  for (std::size_t d = 2; d <= 6; ++d) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j, ++count) {
        CHECK(pair_index(i, j, d) == count);
        auto [a, b] = pair_from_index(count, d);
        CHECK(a == i);
        CHECK(b == j);
      }
  }
}

TEST_CASE("relator images modulo the third filtration step") {
  Relator fwd{{Commutator{0, 1}}};
  auto img = f2f3_image(fwd, 3, 5);
  CHECK(img.coords[pair_index(0, 1, 3)] == 1);
  Relator rev{{Commutator{1, 0}}};
  CHECK(f2f3_image(rev, 3, 5).coords[pair_index(0, 1, 3)] == 4);
  Relator pw{{Power{0, TruncatedPadic::from_exact(5, 4, 5)}}};
  auto pimg = f2f3_image(pw, 3, 5);
  CHECK(std::all_of(pimg.coords.begin(), pimg.coords.end(),
                    [](std::uint64_t v) { return v == 0; }));
  Relator mixed{{Commutator{0, 2}, Power{1, TruncatedPadic::from_exact(5, 4, -5)}}};
  CHECK(f2f3_image(mixed, 3, 5).coords[pair_index(0, 2, 3)] == 1);
}

TEST_CASE("gauss reduction flags dependent relators") {
  Presentation pr;
  pr.p = 5;
  pr.generators = {"x", "y"};
  pr.relators = {Relator{{Commutator{0, 1}}}, Relator{{Commutator{1, 0}}}};
  auto gr = gauss_reduce(pr);
  CHECK(gr.leading_pairs.size() == 1);
  CHECK(gr.leading_pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(gr.dependent_rows == std::vector<std::size_t>{1});
}

TEST_CASE("cup pairing rank equals the edge count for p-RAAG presentations") {
  std::mt19937 rng(79);
  std::uniform_int_distribution<int> pick(0, 3);
  const long long labels[] = {0, 5, -5, 25};
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::uint64_t mask = 0; mask < edge_masks(n); ++mask) {
      auto g = mask_graph(n, mask);
      for (auto& [f1, f2] : g.labels) {
        f1 = TruncatedPadic::from_exact(5, 4, labels[pick(rng)]);
        f2 = TruncatedPadic::from_exact(5, 4, labels[pick(rng)]);
      }
      auto pr = praag_presentation(g);
      CHECK(fp_rank(cup_pairing_matrix(pr)) == g.graph.edges.size());
      CHECK(gauss_reduce(pr).dependent_rows.empty());
    }
  }
}

TEST_CASE("abelianization invariants of edge groups") {
  auto demushkin = pg("pgraph v1\nvertices x y\nedge x y 5 25\n");
  auto ab = abelianization(praag_presentation(demushkin));
  CHECK(ab.free_rank == 1);
  CHECK(ab.torsion == std::vector<unsigned>{1});
  CHECK(ab.to_string(5) == "Z_5 x Z/5");

  auto tw = pg("pgraph v1\nvertices x y\nedge x y 0 25\n");
  auto ab2 = abelianization(praag_presentation(tw));
  CHECK(ab2.free_rank == 1);
  CHECK(ab2.torsion == std::vector<unsigned>{2});
  CHECK(ab2.to_string(5) == "Z_5 x Z/25");

  auto mennicke = parse_pgraph_file(fixture("mennicke.pgraph"));
  auto ab3 = abelianization(praag_presentation(mennicke));
  CHECK(ab3.free_rank == 0);
  CHECK(ab3.torsion == std::vector<unsigned>{1, 1, 1});
  CHECK(ab3.to_string(5) == "Z/5 x Z/5 x Z/5");

  auto freeg = pg("pgraph v1\nvertices a b c\n");
  auto ab4 = abelianization(praag_presentation(freeg));
  CHECK(ab4.free_rank == 3);
  CHECK(ab4.torsion.empty());
  CHECK(ab4.to_string(5) == "Z_5^3");

  // a residue-only zero label leaves the pivot valuation undetermined
  auto fuzzy = pg("pgraph v1\nvertices a b\nedge a b 0~ 0~\n");
  CHECK_THROWS_AS(abelianization(praag_presentation(fuzzy)), PrecisionError);
  // but a decidable minimum valuation still goes through
  auto part = pg("pgraph v1\nvertices a b\nedge a b 0~ 25\n");
  auto ab5 = abelianization(praag_presentation(part));
  CHECK(ab5.free_rank == 1);
  CHECK(ab5.torsion == std::vector<unsigned>{2});
}

TEST_CASE("predicted cohomology is the clique sequence") {
  auto book = parse_pgraph_file(fixture("book.pgraph"));
  CHECK(predicted_cohomology(book).betti == std::vector<long long>{1, 4, 5, 2});
  auto c4 = parse_pgraph_file(fixture("c4.pgraph"));
  CHECK(predicted_cohomology(c4).betti == std::vector<long long>{1, 4, 4});
  CHECK(std::string(PredictedCohomology::annotation).find("degree 2") != std::string::npos);
}

TEST_CASE("quadraticity verdicts carry their reasons") {
  auto c4 = parse_pgraph_file(fixture("c4.pgraph"));
  auto q1 = quadraticity_status(c4);
  CHECK(q1.proven);
  CHECK(q1.reason == QuadReason::TriangleFree);

  auto k3 = pg("pgraph v1\nvertices a b c\nedge a b 0 0\nedge b c 0 0\nedge c a 0 0\n");
  auto q2 = quadraticity_status(k3);
  CHECK(q2.proven);
  CHECK(q2.reason == QuadReason::CompleteUniform);

  auto book = parse_pgraph_file(fixture("book.pgraph"));
  auto q3 = quadraticity_status(book);
  CHECK(q3.proven);
  CHECK(q3.reason == QuadReason::ChordalNonDegenerate);

  auto two = pg(
      "pgraph v1\nvertices a b c d e f\nedge a b 0 0\nedge b c 0 0\nedge c a 0 0\n"
      "edge d e 0 0\nedge e f 0 0\nedge f d 0 0\n");
  auto q4 = quadraticity_status(two);
  CHECK(q4.proven);
  CHECK(q4.reason == QuadReason::DisjointUnionOfProven);

  auto mennicke = parse_pgraph_file(fixture("mennicke.pgraph"));
  auto q5 = quadraticity_status(mennicke);
  CHECK_FALSE(q5.proven);
  CHECK_FALSE(q5.reason.has_value());
  REQUIRE_FALSE(q5.diagnostics.empty());
  CHECK(q5.diagnostics[0].find("x") != std::string::npos);
}

TEST_CASE("completion search outcomes on the bundled graphs") {
  auto g2 = parse_pgraph_file(fixture("gamma2.pgraph"));
  auto done = completion_search(g2);
  REQUIRE(done.kind == CompletionOutcome::Kind::Completed);
  REQUIRE(done.completed.has_value());
  CHECK(done.completed->graph.edges.size() == 3);
  // the added edge got the all-zero label
  const auto& lab = done.completed->labels.back();
  CHECK(lab.first.is_exact_zero());
  CHECK(lab.second.is_exact_zero());
  CHECK_NOTHROW(done.completed->validate());

  auto g3 = parse_pgraph_file(fixture("gamma3.pgraph"));
  auto refuted = completion_search(g3);
  CHECK(refuted.kind == CompletionOutcome::Kind::RefutedModPk);
  CHECK(refuted.refuted_mod == 3);

  // a complete graph completes to itself
  auto k3 = pg("pgraph v1\nvertices a b c\nedge a b 0 0\nedge b c 0 0\nedge c a 0 0\n");
  auto triv = completion_search(k3);
  CHECK(triv.kind == CompletionOutcome::Kind::Completed);
  CHECK(triv.completed->graph.edges.size() == 3);

  // starved budgets must stay inconclusive, not guess
  CompletionSearch tiny;
  tiny.max_assignments = 1;
  auto starved = completion_search(g3, tiny);
  CHECK(starved.kind == CompletionOutcome::Kind::Inconclusive);
  CHECK(starved.note.find("budget") != std::string::npos);
}

TEST_CASE("cyclotomic consistency of edge orientations") {
  auto mennicke = parse_pgraph_file(fixture("mennicke.pgraph"));
  auto table = cyclotomic_check(mennicke);
  CHECK_FALSE(table.cyclotomic());
  CHECK(table.kappa.size() == 3);

  auto demushkin = pg("pgraph v1\nvertices x y\nedge x y 0 5\n");
  CHECK(cyclotomic_check(demushkin).cyclotomic());

  auto zero = parse_pgraph_file(fixture("c4.pgraph"));
  CHECK(cyclotomic_check(zero).cyclotomic());

  // exact 5 against residue-only 5 at a shared vertex is undecidable
  auto mixed = pg("pgraph v1\nvertices a b c\nedge a b -5 0\nedge b c 0 5~\n");
  auto mixed_table = cyclotomic_check(mixed);
  CHECK_THROWS_AS(mixed_table.cyclotomic(), PrecisionError);
  bool saw_undecided = false;
  for (const auto& v : mixed_table.vertex_consistent)
    if (!v.has_value()) saw_undecided = true;
  CHECK(saw_undecided);
}
