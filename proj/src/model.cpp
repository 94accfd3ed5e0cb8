#include "modchar/model.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace modchar {

// ── Construction ─────────────────────────────────────────────────────────

PointedModel::PointedModel(PropSignature sig,
                           std::vector<std::string> state_names,
                           std::vector<std::pair<std::string, std::string>> edges,
                           std::vector<std::pair<std::string, std::vector<std::string>>> valuation,
                           std::string point)
    : sig_(std::move(sig)), names_(std::move(state_names)) {
    if (sig_.size() > 64) throw std::invalid_argument("signature larger than 64 propositions");
    if (names_.empty()) throw std::invalid_argument("model must have at least one state");
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (!index.emplace(names_[i], static_cast<int>(i)).second)
            throw std::invalid_argument("duplicate state id: " + names_[i]);
    }
    colour_.assign(names_.size(), 0);
    for (const auto& [state, props] : valuation) {
        auto it = index.find(state);
        if (it == index.end())
            throw std::invalid_argument("valuation refers to unknown state: " + state);
        for (const auto& p : props) {
            int pi = sig_.index_of(p);
            if (pi < 0)
                throw std::invalid_argument("proposition outside the signature: " + p);
            colour_[it->second] |= (std::uint64_t{1} << pi);
        }
    }
    std::vector<std::pair<int, int>> idx_edges;
    idx_edges.reserve(edges.size());
    for (const auto& [from, to] : edges) {
        auto fi = index.find(from);
        auto ti = index.find(to);
        if (fi == index.end() || ti == index.end())
            throw std::invalid_argument("edge endpoint is not a declared state");
        idx_edges.emplace_back(fi->second, ti->second);
    }
    rebuild_edges(idx_edges);
    auto pi = index.find(point);
    if (pi == index.end()) throw std::invalid_argument("point is not a declared state: " + point);
    point_ = pi->second;
}

void PointedModel::rebuild_edges(const std::vector<std::pair<int, int>>& edges) {
    succ_.assign(names_.size(), {});
    pred_.assign(names_.size(), {});
    for (const auto& [a, b] : edges) {
        succ_[a].push_back(b);
        pred_[b].push_back(a);
    }
    for (auto& v : succ_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (auto& v : pred_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

int PointedModel::state_index(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return -1;
}

bool PointedModel::has_edge(int from, int to) const {
    const auto& s = succ_.at(from);
    return std::binary_search(s.begin(), s.end(), to);
}

int PointedModel::num_edges() const noexcept {
    int n = 0;
    for (const auto& v : succ_) n += static_cast<int>(v.size());
    return n;
}

std::vector<std::string> PointedModel::colour_names(int state) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < sig_.size(); ++i)
        if (state_has(state, static_cast<int>(i))) out.push_back(sig_.names()[i]);
    return out;
}

std::uint64_t PointedModel::full_mask() const {
    return sig_.size() == 64 ? ~std::uint64_t{0}
                             : ((std::uint64_t{1} << sig_.size()) - 1);
}

bool PointedModel::operator==(const PointedModel& o) const {
    return sig_ == o.sig_ && names_ == o.names_ && succ_ == o.succ_ &&
           colour_ == o.colour_ && point_ == o.point_;
}

PointedModel PointedModel::loopstate_empty(const PropSignature& sig) {
    ModelBuilder b(sig);
    int s = b.add_state("s0", 0);
    b.add_edge(s, s);
    b.set_point(s);
    return b.build();
}

PointedModel PointedModel::loopstate_full(const PropSignature& sig) {
    ModelBuilder b(sig);
    std::uint64_t full = sig.size() == 64 ? ~std::uint64_t{0}
                                          : ((std::uint64_t{1} << sig.size()) - 1);
    int s = b.add_state("s0", full);
    b.add_edge(s, s);
    b.set_point(s);
    return b.build();
}

PointedModel PointedModel::deadlock(const PropSignature& sig, std::uint64_t colour) {
    ModelBuilder b(sig);
    b.set_point(b.add_state("s0", colour));
    return b.build();
}

PointedModel PointedModel::path(const PropSignature& sig, int length) {
    if (length < 0) throw std::invalid_argument("path: negative length");
    ModelBuilder b(sig);
    int prev = b.add_state("s0", 0);
    b.set_point(prev);
    for (int i = 1; i <= length; ++i) {
        int s = b.add_state("s" + std::to_string(i), 0);
        b.add_edge(prev, s);
        prev = s;
    }
    return b.build();
}

int ModelBuilder::add_state(std::string name, std::uint64_t colour) {
    m_.names_.push_back(std::move(name));
    m_.colour_.push_back(colour);
    return static_cast<int>(m_.names_.size()) - 1;
}

void ModelBuilder::add_edge(int from, int to) { edges_.emplace_back(from, to); }

PointedModel ModelBuilder::build() {
    if (m_.names_.empty()) throw std::invalid_argument("model must have at least one state");
    if (m_.sig_.size() > 64) throw std::invalid_argument("signature larger than 64 propositions");
    m_.rebuild_edges(edges_);
    return m_;
}

// ── Model checking ───────────────────────────────────────────────────────

namespace {

const std::vector<bool>& eval(const Formula& f, const PointedModel& m,
                              std::unordered_map<const void*, std::vector<bool>>& memo) {
    auto it = memo.find(f.id());
    if (it != memo.end()) return it->second;
    int n = m.num_states();
    std::vector<bool> val(n, false);
    switch (f.kind()) {
        case Formula::Kind::Top:
            val.assign(n, true);
            break;
        case Formula::Kind::Bot:
            break;
        case Formula::Kind::Atom:
        case Formula::Kind::NegAtom: {
            int pi = m.signature().index_of(f.name());
            if (pi < 0)
                throw std::invalid_argument("modelcheck: proposition outside the signature: " +
                                            f.name());
            bool negated = f.kind() == Formula::Kind::NegAtom;
            for (int s = 0; s < n; ++s) val[s] = m.state_has(s, pi) != negated;
            break;
        }
        case Formula::Kind::And: {
            val.assign(n, true);
            for (const auto& c : f.children()) {
                const auto& cv = eval(c, m, memo);
                for (int s = 0; s < n; ++s) val[s] = val[s] && cv[s];
            }
            break;
        }
        case Formula::Kind::Or: {
            for (const auto& c : f.children()) {
                const auto& cv = eval(c, m, memo);
                for (int s = 0; s < n; ++s) val[s] = val[s] || cv[s];
            }
            break;
        }
        case Formula::Kind::Dia: {
            const auto& cv = eval(f.child(), m, memo);
            for (int s = 0; s < n; ++s)
                for (int u : m.successors(s))
                    if (cv[u]) { val[s] = true; break; }
            break;
        }
        case Formula::Kind::Box: {
            const auto& cv = eval(f.child(), m, memo);
            for (int s = 0; s < n; ++s) {
                bool all = true;
                for (int u : m.successors(s))
                    if (!cv[u]) { all = false; break; }
                val[s] = all;
            }
            break;
        }
    }
    return memo.emplace(f.id(), std::move(val)).first->second;
}

}  // namespace

std::vector<bool> modelcheck_all(const Formula& f, const PointedModel& m) {
    std::unordered_map<const void*, std::vector<bool>> memo;
    return eval(f, m, memo);
}

bool modelcheck(const Formula& f, const PointedModel& m) {
    return modelcheck_all(f, m)[m.point()];
}

// ── Height ───────────────────────────────────────────────────────────────

Height height(const PointedModel& m) {
    // DFS from the point; a back edge into the current stack means a
    // reachable cycle, i.e. infinite height.  Otherwise the reachable part
    // is a DAG and the memoized longest-path depth is the height.
    enum class Mark { White, Grey, Black };
    std::vector<Mark> mark(m.num_states(), Mark::White);
    std::vector<int> depth(m.num_states(), 0);
    bool cyclic = false;
    std::function<void(int)> dfs = [&](int s) {
        mark[s] = Mark::Grey;
        int best = 0;
        for (int u : m.successors(s)) {
            if (mark[u] == Mark::Grey) { cyclic = true; return; }
            if (mark[u] == Mark::White) dfs(u);
            if (cyclic) return;
            best = std::max(best, 1 + depth[u]);
        }
        depth[s] = best;
        mark[s] = Mark::Black;
    };
    dfs(m.point());
    return cyclic ? Height::infinite() : Height::of(depth[m.point()]);
}

// ── Structural operations ────────────────────────────────────────────────

PointedModel generated_submodel(const PointedModel& m) {
    std::vector<bool> reach(m.num_states(), false);
    std::vector<int> queue{m.point()};
    reach[m.point()] = true;
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
        for (int u : m.successors(queue[qi]))
            if (!reach[u]) { reach[u] = true; queue.push_back(u); }

    std::vector<int> remap(m.num_states(), -1);
    PointedModel out;
    out.sig_ = m.signature();
    for (int s = 0; s < m.num_states(); ++s) {
        if (!reach[s]) continue;
        remap[s] = static_cast<int>(out.names_.size());
        out.names_.push_back(m.state_name(s));
        out.colour_.push_back(m.colour_mask(s));
    }
    std::vector<std::pair<int, int>> edges;
    for (int s = 0; s < m.num_states(); ++s) {
        if (!reach[s]) continue;
        for (int u : m.successors(s)) edges.emplace_back(remap[s], remap[u]);
    }
    out.rebuild_edges(edges);
    out.point_ = remap[m.point()];
    return out;
}

PointedModel tree_unravel(const PointedModel& m, int n) {
    if (n < 0) throw std::invalid_argument("tree_unravel: negative depth");
    // Breadth-first over paths from the point, at most n edges long.  A
    // path is represented by its end state and depth; states are named in
    // discovery order.
    ModelBuilder b(m.signature());
    struct Item { int end; int depth; int node; };
    std::vector<Item> queue;
    int root = b.add_state("n0", m.colour_mask(m.point()));
    b.set_point(root);
    queue.push_back({m.point(), 0, root});
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        Item it = queue[qi];
        if (it.depth == n) continue;
        for (int u : m.successors(it.end)) {
            int node = b.add_state("n" + std::to_string(b.num_states()), m.colour_mask(u));
            b.add_edge(it.node, node);
            queue.push_back({u, it.depth + 1, node});
        }
    }
    return b.build();
}

PointedModel flip_model(const PointedModel& m) {
    PointedModel out = m;
    std::uint64_t full = m.full_mask();
    for (auto& c : out.colour_) c = full & ~c;
    return out;
}

PointedModel glue(const PropSignature& sig, const std::vector<std::string>& root_props,
                  const std::vector<PointedModel>& examples) {
    ModelBuilder b(sig);
    std::uint64_t root_colour = 0;
    for (const auto& p : root_props) {
        int pi = sig.index_of(p);
        if (pi < 0) throw std::invalid_argument("glue: proposition outside the signature: " + p);
        root_colour |= (std::uint64_t{1} << pi);
    }
    int root = b.add_state("r", root_colour);
    b.set_point(root);
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const PointedModel& e = examples[i];
        if (e.signature() != sig)
            throw std::invalid_argument("glue: example signature mismatch");
        std::string prefix = "e" + std::to_string(i) + ".";
        int base = b.num_states();
        for (int s = 0; s < e.num_states(); ++s)
            b.add_state(prefix + e.state_name(s), e.colour_mask(s));
        for (int s = 0; s < e.num_states(); ++s)
            for (int u : e.successors(s)) b.add_edge(base + s, base + u);
        b.add_edge(root, base + e.point());
    }
    return b.build();
}

// ── Isomorphism ──────────────────────────────────────────────────────────

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 12) + (h >> 4);
    return h * 0xff51afd7ed558ccdull;
}

// One round of colour refinement; returns per-state classes.
std::vector<std::uint64_t> refine_colours(const PointedModel& m) {
    int n = m.num_states();
    std::vector<std::uint64_t> cls(n);
    for (int s = 0; s < n; ++s) cls[s] = mix(0x12345, m.colour_mask(s));
    for (int round = 0; round < n; ++round) {
        std::vector<std::uint64_t> next(n);
        for (int s = 0; s < n; ++s) {
            std::vector<std::uint64_t> out, in;
            for (int u : m.successors(s)) out.push_back(cls[u]);
            for (int u : m.predecessors(s)) in.push_back(cls[u]);
            std::sort(out.begin(), out.end());
            std::sort(in.begin(), in.end());
            std::uint64_t h = mix(cls[s], 0xabcdef);
            for (auto v : out) h = mix(h, v);
            h = mix(h, 0x777);
            for (auto v : in) h = mix(h, v);
            next[s] = h;
        }
        if (next == cls) break;
        cls = std::move(next);
    }
    return cls;
}

bool extend_mapping(const PointedModel& a, const PointedModel& b,
                    const std::vector<std::uint64_t>& ca, const std::vector<std::uint64_t>& cb,
                    std::vector<int>& a_to_b, std::vector<int>& b_to_a, int next) {
    int n = a.num_states();
    if (next == n) return true;
    if (a_to_b[next] >= 0) return extend_mapping(a, b, ca, cb, a_to_b, b_to_a, next + 1);
    for (int t = 0; t < n; ++t) {
        if (b_to_a[t] >= 0) continue;
        if (ca[next] != cb[t]) continue;
        if (a.colour_mask(next) != b.colour_mask(t)) continue;
        if (a.successors(next).size() != b.successors(t).size()) continue;
        if (a.predecessors(next).size() != b.predecessors(t).size()) continue;
        // Check consistency with already mapped neighbours.
        bool ok = true;
        for (int u : a.successors(next))
            if (a_to_b[u] >= 0 && !b.has_edge(t, a_to_b[u])) { ok = false; break; }
        if (ok)
            for (int u : a.predecessors(next))
                if (a_to_b[u] >= 0 && !b.has_edge(a_to_b[u], t)) { ok = false; break; }
        if (ok)
            for (int v : b.successors(t))
                if (b_to_a[v] >= 0 && !a.has_edge(next, b_to_a[v])) { ok = false; break; }
        if (ok)
            for (int v : b.predecessors(t))
                if (b_to_a[v] >= 0 && !a.has_edge(b_to_a[v], next)) { ok = false; break; }
        if (!ok) continue;
        a_to_b[next] = t;
        b_to_a[t] = next;
        if (extend_mapping(a, b, ca, cb, a_to_b, b_to_a, next + 1)) return true;
        a_to_b[next] = -1;
        b_to_a[t] = -1;
    }
    return false;
}

}  // namespace

bool isomorphic(const PointedModel& a, const PointedModel& b) {
    if (a.signature() != b.signature()) return false;
    if (a.num_states() != b.num_states() || a.num_edges() != b.num_edges()) return false;
    auto ca = refine_colours(a);
    auto cb = refine_colours(b);
    if (ca[a.point()] != cb[b.point()]) return false;
    auto sorted_a = ca, sorted_b = cb;
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_b.begin(), sorted_b.end());
    if (sorted_a != sorted_b) return false;
    std::vector<int> a_to_b(a.num_states(), -1), b_to_a(b.num_states(), -1);
    a_to_b[a.point()] = b.point();
    b_to_a[b.point()] = a.point();
    if (a.colour_mask(a.point()) != b.colour_mask(b.point())) return false;
    return extend_mapping(a, b, ca, cb, a_to_b, b_to_a, 0);
}

std::uint64_t canonical_key(const PointedModel& m) {
    auto cls = refine_colours(m);
    std::uint64_t h = mix(0x5eed, static_cast<std::uint64_t>(m.num_states()));
    h = mix(h, static_cast<std::uint64_t>(m.num_edges()));
    h = mix(h, cls[m.point()]);
    std::sort(cls.begin(), cls.end());
    for (auto v : cls) h = mix(h, v);
    return h;
}

std::vector<PointedModel> dedup_isomorphic(std::vector<PointedModel> models) {
    struct Entry { std::uint64_t key; std::size_t idx; };
    std::vector<Entry> entries;
    entries.reserve(models.size());
    for (std::size_t i = 0; i < models.size(); ++i)
        entries.push_back({canonical_key(models[i]), i});
    std::stable_sort(entries.begin(), entries.end(), [&](const Entry& x, const Entry& y) {
        const auto& a = models[x.idx];
        const auto& b = models[y.idx];
        if (a.num_states() != b.num_states()) return a.num_states() < b.num_states();
        if (x.key != y.key) return x.key < y.key;
        return a.num_edges() < b.num_edges();
    });
    std::vector<PointedModel> out;
    std::vector<std::uint64_t> out_keys;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const PointedModel& cand = models[entries[i].idx];
        bool dup = false;
        // Only candidates with the same key can collide; the output stays
        // sorted, so the equal-key block is a suffix.
        for (std::size_t j = out.size(); j-- > 0;) {
            if (out[j].num_states() != cand.num_states()) break;
            if (out_keys[j] != entries[i].key) break;
            if (isomorphic(out[j], cand)) { dup = true; break; }
        }
        if (!dup) {
            out.push_back(cand);
            out_keys.push_back(entries[i].key);
        }
    }
    return out;
}

// ── Serialization ────────────────────────────────────────────────────────

std::string to_json(const PointedModel& m) {
    nlohmann::ordered_json j;
    j["signature"] = m.signature().names();
    auto states = nlohmann::ordered_json::array();
    for (int s = 0; s < m.num_states(); ++s) {
        nlohmann::ordered_json st;
        st["id"] = m.state_name(s);
        st["props"] = m.colour_names(s);
        states.push_back(st);
    }
    j["states"] = states;
    auto edges = nlohmann::ordered_json::array();
    for (int s = 0; s < m.num_states(); ++s)
        for (int u : m.successors(s))
            edges.push_back({m.state_name(s), m.state_name(u)});
    j["edges"] = edges;
    j["point"] = m.point_name();
    return j.dump(2);
}

PointedModel model_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("model JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("model JSON: expected an object");
    static const std::vector<std::string> allowed{"signature", "states", "edges", "point"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw std::invalid_argument("model JSON: unknown field: " + it.key());
    for (const auto& k : allowed)
        if (!j.contains(k)) throw std::invalid_argument("model JSON: missing field: " + k);

    PropSignature sig(j.at("signature").get<std::vector<std::string>>());
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::vector<std::string>>> valuation;
    for (const auto& st : j.at("states")) {
        if (!st.is_object()) throw std::invalid_argument("model JSON: state must be an object");
        for (auto it = st.begin(); it != st.end(); ++it)
            if (it.key() != "id" && it.key() != "props")
                throw std::invalid_argument("model JSON: unknown state field: " + it.key());
        std::string id = st.at("id").get<std::string>();
        names.push_back(id);
        std::vector<std::string> props;
        if (st.contains("props")) props = st.at("props").get<std::vector<std::string>>();
        valuation.emplace_back(id, props);
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("model JSON: edge must be a pair");
        edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return PointedModel(std::move(sig), std::move(names), std::move(edges),
                        std::move(valuation), j.at("point").get<std::string>());
}

PointedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

void save_model(const PointedModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write model file: " + path);
    out << to_json(m) << '\n';
}

std::string to_dot(const PointedModel& m) {
    std::ostringstream out;
    out << "digraph model {\n";
    out << "  rankdir=TB;\n";
    for (int s = 0; s < m.num_states(); ++s) {
        out << "  \"" << m.state_name(s) << "\" [label=\"" << m.state_name(s) << " {";
        auto props = m.colour_names(s);
        for (std::size_t i = 0; i < props.size(); ++i) {
            if (i) out << ",";
            out << props[i];
        }
        out << "}\"";
        if (s == m.point()) out << ", shape=doublecircle";
        else out << ", shape=circle";
        out << "];\n";
    }
    for (int s = 0; s < m.num_states(); ++s)
        for (int u : m.successors(s))
            out << "  \"" << m.state_name(s) << "\" -> \"" << m.state_name(u) << "\";\n";
    out << "}\n";
    return out.str();
}

}  // namespace modchar
