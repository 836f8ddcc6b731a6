#include "honeyquest/sampler.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "honeyquest/rng.hpp"

namespace honeyquest {

namespace {

using Pool = std::vector<const Query*>;

const Query* pick(Pool& candidates, Rng& rng) {
    return candidates[static_cast<std::size_t>(rng.below(candidates.size()))];
}

// Moves up to `want` not-yet-chosen queries from `pool` into `chosen`.
void pad(const Pool& pool, std::size_t want, std::set<std::string>& chosen, std::size_t& have, Rng& rng) {
    if (have >= want) return;
    Pool rest;
    for (const Query* q : pool)
        if (!chosen.count(q->id)) rest.push_back(q);
    rng.shuffle(rest);
    for (const Query* q : rest) {
        if (have >= want) break;
        chosen.insert(q->id);
        ++have;
    }
}

}  // namespace

std::vector<std::string> front_block(const QueryStore& store, std::uint64_t seed) {
    Rng rng(seed);
    std::map<QueryLabel, Pool> by_label;
    std::map<std::string, Pool> by_technique, by_risk, any_with_risk;
    for (const std::string& id : store.main()) {
        const Query& q = store.at(id);
        by_label[q.label].push_back(&q);
        if (q.label == QueryLabel::deceptive && q.technique_ref) by_technique[*q.technique_ref].push_back(&q);
        if (q.label == QueryLabel::risky && q.risk_ref) by_risk[*q.risk_ref].push_back(&q);
        if (q.risk_ref) any_with_risk[*q.risk_ref].push_back(&q);
    }

    std::set<std::string> chosen;
    std::set<std::string> risks_covered;
    std::size_t n_deceptive = 0, n_risky = 0, n_neutral = 0;
    for (auto& [name, pool] : by_technique) {
        const Query* q = pick(pool, rng);
        chosen.insert(q->id);
        if (q->risk_ref) risks_covered.insert(*q->risk_ref);
        ++n_deceptive;
    }
    for (auto& [risk, pool] : by_risk) {
        const Query* q = pick(pool, rng);
        if (chosen.insert(q->id).second) ++n_risky;
        risks_covered.insert(risk);
    }
    for (auto& [risk, pool] : any_with_risk) {
        if (risks_covered.count(risk)) continue;
        const Query* q = pick(pool, rng);
        if (chosen.insert(q->id).second) ++(q->label == QueryLabel::risky ? n_risky : n_deceptive);
        risks_covered.insert(risk);
    }

    const std::size_t third = std::max(n_deceptive, n_risky);
    pad(by_label[QueryLabel::deceptive], third, chosen, n_deceptive, rng);
    pad(by_label[QueryLabel::risky], third, chosen, n_risky, rng);
    pad(by_label[QueryLabel::neutral], third, chosen, n_neutral, rng);

    std::vector<std::string> block(chosen.begin(), chosen.end());
    const std::size_t cap = std::min(kFrontBlockCap, store.main().size());
    if (block.size() > cap) {
        rng.shuffle(block);
        block.resize(cap);
        std::sort(block.begin(), block.end());
    }
    return block;
}

QuerySequence plan_sequence(const QueryStore& store, std::uint64_t seed) {
    QuerySequence seq;
    seq.ids = store.tutorial();
    seq.ids.insert(seq.ids.end(), store.warmup().begin(), store.warmup().end());

    Rng rng(splitmix64(seed ^ 0x5eedf00dULL));
    std::vector<std::string> block = front_block(store, seed);
    rng.shuffle(block);
    const std::set<std::string> in_block(block.begin(), block.end());
    std::vector<std::string> rest;
    for (const std::string& id : store.main())
        if (!in_block.count(id)) rest.push_back(id);
    rng.shuffle(rest);

    seq.front_begin = seq.ids.size();
    seq.ids.insert(seq.ids.end(), block.begin(), block.end());
    seq.front_end = seq.ids.size();
    seq.ids.insert(seq.ids.end(), rest.begin(), rest.end());
    return seq;
}

}  // namespace honeyquest
