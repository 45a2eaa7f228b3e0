#include "schemabridge/safeguard/ensemble.hpp"

#include "schemabridge/resolve/resolver.hpp"

#include <algorithm>
#include <future>
#include <map>

namespace schemabridge {

namespace {

using PairKey = std::pair<std::string, std::string>;  // source ("" for constants), target

struct Tally {
    int votes = 0;
    double confidence_sum = 0.0;
    const FieldMapping* best = nullptr;
};

bool better(const FieldMapping& a, const FieldMapping& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.transform < b.transform;
}

} // namespace

SchemaMapping vote_mappings(const std::vector<SchemaMapping>& members, int n, const SchemaPair& pair) {
    if (n < 1) throw EnsembleFailure("ensemble size must be at least 1");
    const auto needed = static_cast<std::size_t>((n + 2) / 2);
    if (members.size() < needed) {
        throw EnsembleFailure("only " + std::to_string(members.size()) + " of " + std::to_string(n) +
                              " ensemble members returned a valid mapping");
    }
    if (n == 1) {
        if (members.front().fields.empty()) throw EnsembleFailure("ensemble produced an empty mapping");
        return members.front();
    }

    std::map<PairKey, Tally> tallies;
    for (const auto& m : members) {
        // One vote per target per member: its most confident entry.
        std::map<std::string, const FieldMapping*> per_target;
        for (const auto& f : m.fields) {
            auto& slot = per_target[f.target_path.str()];
            if (!slot || better(f, *slot)) slot = &f;
        }
        for (const auto& [target, f] : per_target) {
            Tally& t = tallies[{f->source_path ? f->source_path->str() : std::string{}, target}];
            ++t.votes;
            t.confidence_sum += f->confidence;
            if (!t.best || better(*f, *t.best)) t.best = f;
        }
    }

    struct Survivor {
        const PairKey* key;
        const Tally* tally;
    };
    std::vector<Survivor> survivors;
    for (const auto& [key, tally] : tallies) {
        if (2 * tally.votes > n) survivors.push_back({&key, &tally});
    }
    if (survivors.empty()) throw EnsembleFailure("no field pair reached a majority");

    std::sort(survivors.begin(), survivors.end(), [](const Survivor& a, const Survivor& b) {
        if (a.key->first != b.key->first) return a.key->first < b.key->first;
        if (a.tally->votes != b.tally->votes) return a.tally->votes > b.tally->votes;
        const double ma = a.tally->confidence_sum / a.tally->votes;
        const double mb = b.tally->confidence_sum / b.tally->votes;
        if (ma != mb) return ma > mb;
        return a.key->second < b.key->second;
    });

    SchemaMapping out{pair, {}};
    for (const auto& s : survivors) out.fields.push_back(*s.tally->best);
    return out;
}

SchemaMapping ensemble_vote(LlmSession& llm, const Schema& source, const Schema& target, const MismatchReport& report,
                            int n) {
    if (n < 1) throw EnsembleFailure("ensemble size must be at least 1");
    std::vector<std::future<SchemaMapping>> calls;
    calls.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        calls.push_back(std::async(std::launch::async, [&] { return generate_mapping(llm, source, target, report); }));
    }
    std::vector<SchemaMapping> members;
    for (auto& c : calls) {
        try {
            members.push_back(c.get());
        } catch (const std::exception&) {
            // A failed member is a missing vote.
        }
    }
    return vote_mappings(members, n, {source.hash(), target.hash()});
}

} // namespace schemabridge
