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
#ifndef ROCKB_STORE_HPP
#define ROCKB_STORE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rockb/ontology.hpp"
#include "rockb/rdf.hpp"
#include "rockb/turtle.hpp"

namespace rockb {

struct StoreFrozen : Error {
    StoreFrozen() : Error("store is frozen; the load phase has ended") {}
};

struct TriplePattern {
    std::optional<Term> s, p, o;
};

/// In-memory triple store: dictionary-encoded terms, SPO/POS/OSP index
/// orderings, and forward-chaining materialization of the schema's
/// entailments.
///
/// Lifecycle: single-threaded load phase (insert / load / materialize),
/// then freeze(), then any number of concurrent readers. match() and scan()
/// also work before the freeze for single-threaded callers.
class Store {
public:
    using TermId = std::uint32_t;

    struct IdTriple {
        TermId s, p, o;
        bool operator==(const IdTriple&) const = default;
    };
    struct IdPattern {
        std::optional<TermId> s, p, o;
    };
    struct Stats {
        std::size_t asserted = 0;
        std::size_t inferred = 0;
        std::size_t distinct_subjects = 0;
        std::size_t distinct_predicates = 0;
        bool operator==(const Stats&) const = default;
    };

    Store() = default;
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;
    Store(Store&&) = default;
    Store& operator=(Store&&) = default;

    /// Adds an asserted triple; false when it was already present (an
    /// inferred duplicate is upgraded to asserted).
    bool insert(const Triple& t);

    /// Parses Turtle/N-Triples text straight into the store (asserted).
    /// Blank labels colliding with earlier loads are renamed, as in a graph
    /// merge. Returns the number of newly added triples.
    std::size_t load(const std::string& text, RdfSyntax syntax);

    /// Merges a graph (asserted), renaming colliding blank labels.
    std::size_t insert_graph(const Graph& g);

    /// All triples matching the pattern's bound positions, in term order.
    /// Uses the index whose leading bound positions are maximal.
    std::vector<Triple> match(const TriplePattern& pattern) const;

    /// Fixpoint materialization of the schema's entailments:
    ///   R1  (s,p,o), p subPropertyOf q          =>  (s,q,o)
    ///   R2  (s,rdf:type,c), c subClassOf d      =>  (s,rdf:type,d)
    ///   R3  (s,p,o), domain(p)=c               =>  (s,rdf:type,c)
    ///   R4  (s,p,o), inverse(p)=q, o resource  =>  (o,q,s)
    /// Inferred triples are flagged; a repeated call adds nothing and
    /// returns 0.
    std::size_t materialize(const OntologySchema& schema);

    Stats stats() const;
    std::size_t size() const { return flags_.size(); }

    /// Deterministic N-Triples dump (term order). With annotate_inferred,
    /// inferred triples carry a trailing "# inferred" comment.
    std::string dump_ntriples(bool annotate_inferred = false) const;

    /// Ends the load phase: builds the three indexes and rejects further
    /// writes. Idempotent.
    void freeze();
    bool is_frozen() const { return frozen_; }

    // --- id-level interface for the query engine ---

    /// Dictionary lookup without interning; nullopt when the term has never
    /// been seen (a pattern using it cannot match anything).
    std::optional<TermId> find_id(const Term& t) const;
    const Term& term(TermId id) const { return terms_[id]; }

    /// Contiguous matching range from the best index. Entries arrive in
    /// that index's order, not necessarily (s,p,o) term order.
    std::span<const IdTriple> scan(const IdPattern& pattern) const;

private:
    struct TermHash {
        std::size_t operator()(const Term& t) const;
    };
    struct KeyHash {
        std::size_t operator()(const std::array<TermId, 3>& k) const;
    };

    TermId intern(const Term& t);
    void ensure_indexes() const;
    bool add_triple(TermId s, TermId p, TermId o, bool inferred);

    std::vector<Term> terms_;
    std::unordered_map<Term, TermId, TermHash> ids_;
    std::unordered_map<std::array<TermId, 3>, bool, KeyHash> flags_;  // key -> inferred
    std::vector<IdTriple> insertion_order_;  // every triple once, load order
    std::set<std::string> blank_labels_;

    mutable std::vector<IdTriple> spo_, pos_, osp_;
    mutable std::vector<std::uint32_t> rank_;  // term id -> term-order rank
    mutable bool indexes_current_ = false;
    bool frozen_ = false;
};

}  // namespace rockb

#endif  // ROCKB_STORE_HPP
