#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "satis/hierarchy.hpp"
#include "satis/query_eval.hpp"
#include "satis/turtle.hpp"
#include "satis/vocab.hpp"

#include "oracles.hpp"

using namespace satis;

namespace {

std::string fixture(const std::string& rel) {
    std::ifstream in(std::string(SATIS_FIXTURES_DIR) + "/" + rel, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Graph demo_registry(bool with_s4) {
    Graph g;
    for (const std::string rel :
         {"memory-demo/ontology/dom.ttl", "memory-demo/services/s1.ttl",
          "memory-demo/services/s2.ttl", "memory-demo/services/s3.ttl"}) {
        auto r = parse_turtle(fixture(rel));
        REQUIRE(r.ok());
        // isolate each file's blanks, as the registry loader does
        Graph shifted;
        std::string prefix = rel.substr(rel.rfind('/') + 1);
        for (const auto& t : r.graph.triples()) {
            auto shift = [&](const Term& x) {
                return x.is_blank() ? Term::blank(prefix + x.value) : x;
            };
            shifted.insert({shift(t.s), shift(t.p), shift(t.o)});
        }
        for (const auto& [p, iri] : r.graph.namespaces()) shifted.add_namespace(p, iri);
        g.merge(shifted);
    }
    if (with_s4) {
        auto r = parse_turtle(fixture("extra/s4.ttl"));
        REQUIRE(r.ok());
        Graph shifted;
        for (const auto& t : r.graph.triples()) {
            auto shift = [&](const Term& x) {
                return x.is_blank() ? Term::blank("s4" + x.value) : x;
            };
            shifted.insert({shift(t.s), shift(t.p), shift(t.o)});
        }
        g.merge(shifted);
    }
    return g;
}

std::set<std::string> selected_services(const Graph& g, const ClassHierarchy& h,
                                        const Query& q) {
    std::set<std::string> out;
    for (const auto& row : eval_select(g, h, q)) {
        REQUIRE(row.size() == 1);
        out.insert(row.front().value);
    }
    return out;
}

GraphPattern random_pattern(std::mt19937& rng) {
    std::uniform_int_distribution<int> small(0, 2);
    std::uniform_int_distribution<int> kind(0, 5);
    std::vector<Variable> pool{{"a"}, {"b"}, {"c"}};
    auto term = [&](bool pred) -> PatternTerm {
        int k = kind(rng);
        if (k <= 1) return pool[static_cast<std::size_t>(small(rng))];
        if (pred) return oracle::dom_term("p" + std::to_string(small(rng)));
        if (k == 2) return Term::blank("b" + std::to_string(small(rng)));
        if (k == 3) return Term::literal("plain value");
        return oracle::dom_term((k == 4 ? "s" : "o") + std::to_string(small(rng) * 2));
    };
    GraphPattern gp;
    std::uniform_int_distribution<int> n_pat(1, 4);
    int n = n_pat(rng);
    for (int i = 0; i < n; ++i) gp.patterns.push_back({term(false), term(true), term(false)});

    std::vector<Variable> bound;
    for (const auto& tp : gp.patterns)
        for (const auto* t : {&tp.s, &tp.p, &tp.o})
            if (is_var(*t) && std::find(bound.begin(), bound.end(), as_var(*t)) == bound.end())
                bound.push_back(as_var(*t));
    if (!bound.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, bound.size() - 1);
        int n_filt = small(rng);
        for (int i = 0; i < n_filt; ++i) {
            FilterOp op = i == 0 ? FilterOp::TypeSub
                                 : (small(rng) == 0 ? FilterOp::Eq : FilterOp::TypeEq);
            gp.filters.push_back({bound[pick(rng)], op,
                                  oracle::kDomNs + (small(rng) == 0 ? "o2" : "T1")});
        }
    }
    return gp;
}

Graph random_corpus(std::mt19937& rng) {
    Graph g = oracle::random_turtle_graph(rng);
    // sprinkle type and subclass triples so the type filters have teeth
    std::uniform_int_distribution<int> small(0, 2);
    g.insert({oracle::dom_term("o2"), Term::iri(vocab::kRdfsSubClassOf),
              oracle::dom_term("T1")});
    for (int i = 0; i < small(rng) + 1; ++i)
        g.insert({Term::blank("b" + std::to_string(i)), Term::iri(vocab::kRdfType),
                  oracle::dom_term(small(rng) == 0 ? "o2" : "T1")});
    return g;
}

}  // namespace

TEST_CASE("debiasing pattern selects S1 only; S4 joins under subsumption") {
    auto q = parse_query(fixture("memory-demo/queries/debiasing.rq"));
    REQUIRE(q.ok());

    Graph g = demo_registry(false);
    g.seal();
    ClassHierarchy h = subclass_closure(g);
    CHECK(selected_services(g, h, *q.query) ==
          std::set<std::string>{"http://svc.example.org/S1"});

    Graph g4 = demo_registry(true);
    g4.seal();
    ClassHierarchy h4 = subclass_closure(g4);
    CHECK(selected_services(g4, h4, *q.query) ==
          std::set<std::string>{"http://svc.example.org/S1", "http://svc.example.org/S4"});
}

TEST_CASE("one-pattern query over an empty graph") {
    Graph g;
    g.seal();
    ClassHierarchy h;
    GraphPattern gp;
    gp.patterns.push_back({Variable{"x"}, oracle::dom_term("p"), Variable{"y"}});
    CHECK(eval_pattern(g, h, gp).empty());
}

TEST_CASE("filter operator semantics") {
    Graph g;
    g.insert({Term::blank("p"), Term::iri(vocab::kRdfType), oracle::dom_term("MRImage")});
    g.insert({oracle::dom_term("MRImage"), Term::iri(vocab::kRdfsSubClassOf),
              oracle::dom_term("Image")});
    g.seal();
    ClassHierarchy h = subclass_closure(g);

    Binding b;
    b.terms[{"x"}] = Term::blank("p");
    CHECK_FALSE(eval_filter(b, {{"x"}, FilterOp::TypeEq, oracle::kDomNs + "Image"}, g, h));
    CHECK(eval_filter(b, {{"x"}, FilterOp::TypeEq, oracle::kDomNs + "MRImage"}, g, h));
    CHECK(eval_filter(b, {{"x"}, FilterOp::TypeSub, oracle::kDomNs + "Image"}, g, h));

    // untyped resource never satisfies a type filter
    Binding u;
    u.terms[{"x"}] = oracle::dom_term("Image");
    CHECK_FALSE(eval_filter(u, {{"x"}, FilterOp::TypeEq, oracle::kDomNs + "Image"}, g, h));
    CHECK_FALSE(eval_filter(u, {{"x"}, FilterOp::TypeSub, oracle::kDomNs + "Image"}, g, h));

    // plain equality is term identity
    CHECK(eval_filter(u, {{"x"}, FilterOp::Eq, oracle::kDomNs + "Image"}, g, h));
    CHECK_FALSE(eval_filter(u, {{"x"}, FilterOp::Eq, oracle::kDomNs + "MRImage"}, g, h));
}

TEST_CASE("eval_pattern equals the brute-force enumerator on random corpora") {
    std::mt19937 rng(53);
    for (int round = 0; round < 220; ++round) {
        Graph g = random_corpus(rng);
        g.seal();
        ClassHierarchy h = subclass_closure(g);
        GraphPattern gp = random_pattern(rng);

        auto got = eval_pattern(g, h, gp);
        std::set<std::map<Variable, Term>> got_set;
        for (const auto& b : got) got_set.insert(b.terms);
        CHECK(got_set.size() == got.size());  // duplicates removed
        CHECK(got_set == oracle::eval_brute(g, h, gp));

        // join order independence
        GraphPattern shuffled = gp;
        std::shuffle(shuffled.patterns.begin(), shuffled.patterns.end(), rng);
        auto reordered = eval_pattern(g, h, shuffled);
        std::set<std::map<Variable, Term>> reordered_set;
        for (const auto& b : reordered) reordered_set.insert(b.terms);
        CHECK(reordered_set == got_set);
    }
}

TEST_CASE("adding triples never removes bindings") {
    std::mt19937 rng(59);
    for (int round = 0; round < 40; ++round) {
        Graph small_g = random_corpus(rng);
        Graph big_g = small_g;
        big_g.merge(random_corpus(rng));
        small_g.seal();
        big_g.seal();
        ClassHierarchy hs = subclass_closure(small_g);
        ClassHierarchy hb = subclass_closure(big_g);
        GraphPattern gp = random_pattern(rng);

        std::set<std::map<Variable, Term>> before, after;
        for (const auto& b : eval_pattern(small_g, hs, gp)) before.insert(b.terms);
        for (const auto& b : eval_pattern(big_g, hb, gp)) after.insert(b.terms);
        CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
    }
}

TEST_CASE("eval_select is deterministic, distinct and sorted") {
    Graph g = demo_registry(true);
    g.seal();
    ClassHierarchy h = subclass_closure(g);
    auto q = parse_query(fixture("memory-demo/queries/debiasing.rq"));
    REQUIRE(q.ok());
    auto rows = eval_select(g, h, *q.query);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] < rows[1]);
    CHECK(rows == eval_select(g, h, *q.query));
}
