/*
* Copyright (C) 2026 The rockb authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "rockb/store.hpp"

#include <algorithm>
#include <set>

namespace rockb {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::size_t Store::TermHash::operator()(const Term& t) const {
    std::hash<std::string> h;
    std::size_t seed = t.index();
    if (auto* b = std::get_if<BlankNode>(&t)) return hash_combine(seed, h(b->label));
    if (auto* i = std::get_if<Iri>(&t)) return hash_combine(seed, h(i->value));
    const auto& l = std::get<Literal>(t);
    return hash_combine(hash_combine(hash_combine(seed, h(l.lexical)), h(l.datatype)), h(l.lang));
}

std::size_t Store::KeyHash::operator()(const std::array<TermId, 3>& k) const {
    std::size_t seed = 0;
    for (TermId id : k) seed = hash_combine(seed, id);
    return seed;
}

Store::TermId Store::intern(const Term& t) {
    auto it = ids_.find(t);
    if (it != ids_.end()) return it->second;
    TermId id = static_cast<TermId>(terms_.size());
    terms_.push_back(t);
    ids_.emplace(t, id);
    if (auto* b = std::get_if<BlankNode>(&t)) blank_labels_.insert(b->label);
    return id;
}

std::optional<Store::TermId> Store::find_id(const Term& t) const {
    auto it = ids_.find(t);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

bool Store::add_triple(TermId s, TermId p, TermId o, bool inferred) {
    auto [it, fresh] = flags_.try_emplace({s, p, o}, inferred);
    if (!fresh) {
        if (!inferred) it->second = false;  // asserted wins over inferred
        return false;
    }
    insertion_order_.push_back({s, p, o});
    indexes_current_ = false;
    return true;
}

bool Store::insert(const Triple& t) {
    if (frozen_) throw StoreFrozen();
    return add_triple(intern(t.subject), intern(Term{t.predicate}), intern(t.object), false);
}

std::size_t Store::insert_graph(const Graph& g) {
    if (frozen_) throw StoreFrozen();
    // Renaming against earlier loads, as in Graph::merge.
    std::map<std::string, std::string> rename;
    std::set<std::string> fresh_labels;
    std::size_t counter = 0;
    auto final_label = [&](const std::string& label) -> const std::string& {
        auto it = rename.find(label);
        if (it != rename.end()) return it->second;
        std::string target = label;
        if (blank_labels_.count(label) || fresh_labels.count(label)) {
            do {
                target = label + ".r" + std::to_string(counter++);
            } while (blank_labels_.count(target) || fresh_labels.count(target));
        }
        fresh_labels.insert(target);
        return rename.emplace(label, std::move(target)).first->second;
    };
    auto remap = [&](const Term& t) -> Term {
        if (auto* b = std::get_if<BlankNode>(&t)) return BlankNode{final_label(b->label)};
        return t;
    };
    std::size_t added = 0;
    for (const auto& t : g.triples())
        if (add_triple(intern(remap(t.subject)), intern(Term{t.predicate}),
                       intern(remap(t.object)), false))
            ++added;
    return added;
}

std::size_t Store::load(const std::string& text, RdfSyntax syntax) {
    if (frozen_) throw StoreFrozen();
    Graph g = parse_rdf(text, syntax);
    return insert_graph(g);
}

void Store::ensure_indexes() const {
    if (indexes_current_) return;

    // Term-order ranks make index comparisons integer-only.
    std::vector<TermId> by_term(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) by_term[i] = static_cast<TermId>(i);
    std::sort(by_term.begin(), by_term.end(),
              [&](TermId a, TermId b) { return terms_[a] < terms_[b]; });
    rank_.assign(terms_.size(), 0);
    for (std::size_t r = 0; r < by_term.size(); ++r)
        rank_[by_term[r]] = static_cast<std::uint32_t>(r);

    spo_ = insertion_order_;
    auto key = [&](const IdTriple& t, int a, int b, int c) {
        auto part = [&](int k) { return k == 0 ? rank_[t.s] : k == 1 ? rank_[t.p] : rank_[t.o]; };
        return std::array<std::uint32_t, 3>{part(a), part(b), part(c)};
    };
    std::sort(spo_.begin(), spo_.end(),
              [&](const IdTriple& x, const IdTriple& y) { return key(x, 0, 1, 2) < key(y, 0, 1, 2); });
    pos_ = spo_;
    std::sort(pos_.begin(), pos_.end(),
              [&](const IdTriple& x, const IdTriple& y) { return key(x, 1, 2, 0) < key(y, 1, 2, 0); });
    osp_ = spo_;
    std::sort(osp_.begin(), osp_.end(),
              [&](const IdTriple& x, const IdTriple& y) { return key(x, 2, 0, 1) < key(y, 2, 0, 1); });
    indexes_current_ = true;
}

void Store::freeze() {
    ensure_indexes();
    frozen_ = true;
}

std::span<const Store::IdTriple> Store::scan(const IdPattern& pattern) const {
    ensure_indexes();

    // Index choice: longest bound prefix wins; ties prefer SPO, then POS.
    enum Index { SPO, POS, OSP };
    auto prefix_of = [](std::optional<TermId> a, std::optional<TermId> b,
                        std::optional<TermId> c) { return a ? (b ? (c ? 3 : 2) : 1) : 0; };
    int len_spo = prefix_of(pattern.s, pattern.p, pattern.o);
    int len_pos = prefix_of(pattern.p, pattern.o, pattern.s);
    int len_osp = prefix_of(pattern.o, pattern.s, pattern.p);
    Index which = SPO;
    if (len_pos > len_spo) which = POS;
    if (len_osp > (which == SPO ? len_spo : len_pos)) which = OSP;

    const std::vector<IdTriple>& index = which == SPO ? spo_ : which == POS ? pos_ : osp_;

    // Bound prefix values in the chosen index's component order.
    std::array<std::optional<TermId>, 3> prefix;
    if (which == SPO) prefix = {pattern.s, pattern.p, pattern.o};
    else if (which == POS) prefix = {pattern.p, pattern.o, pattern.s};
    else prefix = {pattern.o, pattern.s, pattern.p};
    // A hole in the middle ends the usable prefix; the caller filters the rest.
    int prefix_len = 0;
    for (int i = 0; i < 3 && prefix[i]; ++i) ++prefix_len;

    auto component = [&](const IdTriple& t, int slot) {
        if (which == SPO) return slot == 0 ? t.s : slot == 1 ? t.p : t.o;
        if (which == POS) return slot == 0 ? t.p : slot == 1 ? t.o : t.s;
        return slot == 0 ? t.o : slot == 1 ? t.s : t.p;
    };

    auto lo = index.begin(), hi = index.end();
    for (int slot = 0; slot < prefix_len; ++slot) {
        TermId want = *prefix[slot];
        auto range = std::equal_range(lo, hi, want, [&](const auto& a, const auto& b) {
            std::uint32_t ra, rb;
            if constexpr (std::is_same_v<std::decay_t<decltype(a)>, IdTriple>) ra = rank_[component(a, slot)];
            else ra = rank_[a];
            if constexpr (std::is_same_v<std::decay_t<decltype(b)>, IdTriple>) rb = rank_[component(b, slot)];
            else rb = rank_[b];
            return ra < rb;
        });
        lo = range.first;
        hi = range.second;
    }
    return {lo, hi};
}

std::vector<Triple> Store::match(const TriplePattern& pattern) const {
    IdPattern ids;
    auto resolve = [&](const std::optional<Term>& t, std::optional<TermId>& out) {
        if (!t) return true;
        auto id = find_id(*t);
        if (!id) return false;  // unseen constant: nothing can match
        out = *id;
        return true;
    };
    if (!resolve(pattern.s, ids.s) || !resolve(pattern.p, ids.p) || !resolve(pattern.o, ids.o))
        return {};

    std::vector<IdTriple> hits;
    for (const auto& t : scan(ids)) {
        if (ids.s && t.s != *ids.s) continue;
        if (ids.p && t.p != *ids.p) continue;
        if (ids.o && t.o != *ids.o) continue;
        hits.push_back(t);
    }
    std::sort(hits.begin(), hits.end(), [&](const IdTriple& a, const IdTriple& b) {
        return std::array{rank_[a.s], rank_[a.p], rank_[a.o]} <
               std::array{rank_[b.s], rank_[b.p], rank_[b.o]};
    });
    std::vector<Triple> out;
    out.reserve(hits.size());
    for (const auto& t : hits)
        out.emplace_back(terms_[t.s], std::get<Iri>(terms_[t.p]), terms_[t.o]);
    return out;
}

std::size_t Store::materialize(const OntologySchema& schema) {
    if (frozen_) throw StoreFrozen();

    TermId type_id = intern(Iri{rdf::type});

    // Schema relations in id space. Interning schema terms here is fine:
    // unused entries simply never fire.
    std::unordered_map<TermId, std::vector<TermId>> super_props, super_classes;
    std::unordered_map<TermId, TermId> domain_of;
    std::unordered_map<TermId, TermId> inverse_of;

    auto prop_ids = [&](const std::set<std::string>& names) {
        for (const auto& n : names) (void)intern(Iri{n});
    };
    prop_ids(schema.object_properties);
    prop_ids(schema.data_properties);

    std::set<std::string> all_props = schema.object_properties;
    all_props.insert(schema.data_properties.begin(), schema.data_properties.end());
    for (const auto& [sub, super] : schema.subproperty_of) {
        all_props.insert(sub);
        all_props.insert(super);
    }
    for (const auto& p : all_props) {
        auto supers = schema.super_properties(p);
        if (supers.empty()) continue;
        auto& v = super_props[intern(Iri{p})];
        for (const auto& q : supers) v.push_back(intern(Iri{q}));
    }
    std::set<std::string> all_classes = schema.classes;
    for (const auto& [sub, super] : schema.subclass_of) {
        all_classes.insert(sub);
        all_classes.insert(super);
    }
    for (const auto& c : all_classes) {
        auto supers = schema.super_classes(c);
        if (supers.empty()) continue;
        auto& v = super_classes[intern(Iri{c})];
        for (const auto& d : supers) v.push_back(intern(Iri{d}));
    }
    for (const auto& [p, c] : schema.domains) domain_of[intern(Iri{p})] = intern(Iri{c});
    for (const auto& [p, q] : schema.inverse_of) {
        TermId pid = intern(Iri{p}), qid = intern(Iri{q});
        inverse_of[pid] = qid;
        inverse_of[qid] = pid;
    }

    auto is_resource = [&](TermId id) { return !is_literal(terms_[id]); };

    std::size_t added_total = 0;
    std::vector<IdTriple> delta = insertion_order_;
    while (!delta.empty()) {
        std::vector<IdTriple> next;
        auto derive = [&](TermId s, TermId p, TermId o) {
            if (add_triple(s, p, o, true)) {
                next.push_back({s, p, o});
                ++added_total;
            }
        };
        for (const auto& t : delta) {
            if (auto it = super_props.find(t.p); it != super_props.end())
                for (TermId q : it->second) derive(t.s, q, t.o);
            if (t.p == type_id) {
                if (auto it = super_classes.find(t.o); it != super_classes.end())
                    for (TermId d : it->second) derive(t.s, type_id, d);
            }
            if (auto it = domain_of.find(t.p); it != domain_of.end())
                derive(t.s, type_id, it->second);
            if (auto it = inverse_of.find(t.p); it != inverse_of.end())
                if (is_resource(t.o)) derive(t.o, it->second, t.s);
        }
        delta = std::move(next);
    }
    return added_total;
}

Store::Stats Store::stats() const {
    Stats st;
    std::set<TermId> subjects, predicates;
    for (const auto& [key, inferred] : flags_) {
        if (inferred) ++st.inferred;
        else ++st.asserted;
        subjects.insert(key[0]);
        predicates.insert(key[1]);
    }
    st.distinct_subjects = subjects.size();
    st.distinct_predicates = predicates.size();
    return st;
}

std::string Store::dump_ntriples(bool annotate_inferred) const {
    ensure_indexes();
    std::string out;
    for (const auto& t : spo_) {
        out += term_to_ntriples(terms_[t.s]);
        out += ' ';
        out += term_to_ntriples(terms_[t.p]);
        out += ' ';
        out += term_to_ntriples(terms_[t.o]);
        out += " .";
        if (annotate_inferred && flags_.at({t.s, t.p, t.o})) out += " # inferred";
        out += '\n';
    }
    return out;
}

}  // namespace rockb
