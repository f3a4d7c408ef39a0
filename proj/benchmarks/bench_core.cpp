// Microbenchmarks over a synthetic in-memory knowledge base: triple lookup,
// closure construction, query evaluation and goal rendering.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "satis/engine.hpp"
#include "satis/hierarchy.hpp"
#include "satis/query_eval.hpp"
#include "satis/vocab.hpp"

namespace {

using namespace satis;

const std::string kDom = "http://satis.example.org/dom#";

Graph make_registry(int services) {
    Graph g;
    for (int i = 0; i < services; ++i) {
        std::string n = std::to_string(i);
        Term svc = Term::iri("http://svc.example.org/s" + n);
        Term in = Term::blank("in" + n);
        Term out = Term::blank("out" + n);
        g.insert({svc, Term::iri(vocab::kHasInput), in});
        g.insert({in, Term::iri(vocab::kRdfType), Term::iri(kDom + "C" + std::to_string(i % 8))});
        g.insert({svc, Term::iri(vocab::kHasOutput), out});
        g.insert({out, Term::iri(vocab::kRdfType),
                  Term::iri(kDom + "C" + std::to_string((i + 1) % 8))});
    }
    return g;
}

Graph make_taxonomy(int classes) {
    Graph g;
    for (int i = 1; i < classes; ++i)
        g.insert({Term::iri(kDom + "C" + std::to_string(i)),
                  Term::iri(vocab::kRdfsSubClassOf),
                  Term::iri(kDom + "C" + std::to_string(i / 2))});
    return g;
}

GraphPattern service_pattern() {
    GraphPattern p;
    Variable svc{"service"}, in{"r1"}, out{"r2"};
    p.patterns.push_back({svc, Term::iri(vocab::kHasInput), in});
    p.patterns.push_back({svc, Term::iri(vocab::kHasOutput), out});
    p.filters.push_back({in, FilterOp::TypeSub, kDom + "C0"});
    return p;
}

void bm_match(benchmark::State& state) {
    Graph g = make_registry(static_cast<int>(state.range(0)));
    Term p = Term::iri(vocab::kHasInput);
    for (auto _ : state)
        benchmark::DoNotOptimize(g.match(std::nullopt, p, std::nullopt));
}
BENCHMARK(bm_match)->Arg(64)->Arg(512);

void bm_closure(benchmark::State& state) {
    Graph g = make_taxonomy(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(subclass_closure(g));
}
BENCHMARK(bm_closure)->Arg(32)->Arg(256);

void bm_eval_pattern(benchmark::State& state) {
    Graph g = make_registry(static_cast<int>(state.range(0)));
    g.merge(make_taxonomy(8));
    ClassHierarchy h = subclass_closure(g);
    GraphPattern p = service_pattern();
    for (auto _ : state)
        benchmark::DoNotOptimize(eval_pattern(g, h, p));
}
BENCHMARK(bm_eval_pattern)->Arg(64)->Arg(512);

void bm_render(benchmark::State& state) {
    Graph g = make_registry(64);
    g.merge(make_taxonomy(8));
    ClassHierarchy h = subclass_closure(g);

    // A chain of abstract rules ending in one concrete rule per link.
    std::vector<Rule> rules;
    int depth = static_cast<int>(state.range(0));
    for (int i = 0; i < depth; ++i) {
        std::string verb = kDom + "V" + std::to_string(i);
        SectionPattern head;
        head.target_verb = verb;
        head.target_object = kDom + "C0";

        Rule concrete;
        concrete.id = "c" + std::to_string(i);
        concrete.head = head;
        concrete.body = ConcreteBody{service_pattern(), Variable{"service"}};
        rules.push_back(concrete);

        if (i + 1 < depth) {
            SectionPattern sub;
            sub.target_verb = kDom + "V" + std::to_string(i + 1);
            sub.target_object = kDom + "C0";
            Rule abstract;
            abstract.id = "a" + std::to_string(i);
            abstract.head = head;
            abstract.body = AbstractBody{{sub}};
            rules.push_back(abstract);
        }
    }
    Engine engine(g, h, rules);
    SectionPattern goal;
    goal.target_verb = kDom + "V0";
    goal.target_object = kDom + "C0";
    for (auto _ : state) {
        auto report = engine.render(goal);
        benchmark::DoNotOptimize(engine.flatten(report));
    }
}
BENCHMARK(bm_render)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
