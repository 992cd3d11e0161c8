#include "digrid/dgf.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace digrid {

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) {
        if (t[0] == '#') break;
        out.push_back(t);
    }
    return out;
}

int to_int(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size() || v < 0) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw DgfError(line, "expected non-negative integer, got '" + s + "'");
    }
}

}  // namespace

const NamedPath* DgfDocument::find_path(const std::string& n) const {
    for (const auto& p : paths)
        if (p.name == n) return &p;
    return nullptr;
}

DgfDocument parse_dgf(const std::string& text) {
    DgfDocument doc;
    std::vector<VertexId> verts;
    std::vector<Edge> edges;
    struct PendingPath {
        std::string name;
        std::vector<std::string> toks;
        bool circuit;
        int line;
    };
    std::vector<PendingPath> pending_paths;
    std::vector<std::pair<std::vector<std::string>, int>> pending_rot;
    bool saw_header = false, saw_cert = false, saw_script = false;
    bool in_cert = false, in_script = false;

    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        auto tk = tokens(line);
        if (tk.empty()) continue;
        const std::string& kw = tk[0];

        if (in_cert) {
            if (kw == "endcert") {
                in_cert = false;
                continue;
            }
            if (kw == "order:") {
                if (tk.size() != 2) throw DgfError(ln, "order: needs one value");
                doc.cert->order = to_int(tk[1], ln);
                continue;
            }
            if (kw == "Z:") {
                auto arrow = std::find(tk.begin(), tk.end(), "->");
                if (arrow == tk.end() || arrow + 2 != tk.end())
                    throw DgfError(ln, "cert entry needs 'Z: v... -> rep'");
                CertEntry ce;
                for (auto it = tk.begin() + 1; it != arrow; ++it)
                    ce.z.push_back(to_int(*it, ln));
                std::sort(ce.z.begin(), ce.z.end());
                ce.rep = to_int(*(arrow + 1), ln);
                doc.cert->entries.push_back(std::move(ce));
                continue;
            }
            throw DgfError(ln, "unexpected line in cert block");
        }
        if (in_script) {
            if (kw == "endscript") {
                in_script = false;
                continue;
            }
            if (kw == "del" && tk.size() == 3 && tk[1] == "v") {
                doc.script->steps.push_back({StepKind::DeleteVertex, to_int(tk[2], ln)});
                continue;
            }
            if (kw == "del" && tk.size() == 3 && tk[1] == "e") {
                doc.script->steps.push_back({StepKind::DeleteEdge, to_int(tk[2], ln)});
                continue;
            }
            if (kw == "contract" && tk.size() == 2) {
                doc.script->steps.push_back({StepKind::Contract, to_int(tk[1], ln)});
                continue;
            }
            if (kw == "map" && tk.size() == 3) {
                doc.script->final_map[to_int(tk[1], ln)] = to_int(tk[2], ln);
                continue;
            }
            throw DgfError(ln, "unexpected line in script block");
        }

        if (kw == "digraph") {
            if (saw_header) throw DgfError(ln, "duplicate digraph header");
            if (tk.size() != 2) throw DgfError(ln, "digraph header needs a name");
            saw_header = true;
            doc.name = tk[1];
        } else if (kw == "v") {
            if (tk.size() != 2) throw DgfError(ln, "v line needs one id");
            verts.push_back(to_int(tk[1], ln));
        } else if (kw == "e") {
            if (tk.size() != 4) throw DgfError(ln, "e line needs id tail head");
            edges.push_back({to_int(tk[1], ln), to_int(tk[2], ln), to_int(tk[3], ln)});
        } else if (kw == "rot") {
            pending_rot.push_back({std::vector<std::string>(tk.begin() + 1, tk.end()), ln});
        } else if (kw == "mark") {
            if (tk.size() < 2) throw DgfError(ln, "mark line needs a name");
            auto& dst = doc.marks[tk[1]];
            for (std::size_t i = 2; i < tk.size(); ++i) dst.push_back(to_int(tk[i], ln));
        } else if (kw == "set") {
            if (tk.size() < 2) throw DgfError(ln, "set line needs a name");
            auto& dst = doc.sets[tk[1]];
            for (std::size_t i = 2; i < tk.size(); ++i) dst.push_back(to_int(tk[i], ln));
        } else if (kw == "path" || kw == "circuit") {
            if (tk.size() < 3) throw DgfError(ln, "path line needs a name and a vertex");
            pending_paths.push_back({tk[1], std::vector<std::string>(tk.begin() + 2, tk.end()),
                                     kw == "circuit", ln});
        } else if (kw == "grid") {
            if (tk.size() < 3) throw DgfError(ln, "grid line needs flavor and size");
            DgfDocument::GridHeader gh;
            gh.flavor = tk[1];
            gh.n = to_int(tk[2], ln);
            if (gh.flavor == "cyl") {
                gh.circuits.assign(tk.begin() + 3, tk.end());
            } else if (gh.flavor == "plain" || gh.flavor == "bubble") {
                std::size_t i = 3;
                if (i >= tk.size() || tk[i] != "h:") throw DgfError(ln, "grid needs 'h:' list");
                ++i;
                while (i < tk.size() && tk[i] != "v:") gh.horizontals.push_back(tk[i++]);
                if (i >= tk.size() || tk[i] != "v:") throw DgfError(ln, "grid needs 'v:' list");
                ++i;
                while (i < tk.size()) gh.verticals.push_back(tk[i++]);
            } else {
                throw DgfError(ln, "unknown grid flavor '" + gh.flavor + "'");
            }
            doc.grids.push_back(std::move(gh));
        } else if (kw == "cert") {
            if (saw_cert) throw DgfError(ln, "duplicate cert block");
            saw_cert = in_cert = true;
            doc.cert = CertBlock{};
        } else if (kw == "script") {
            if (saw_script) throw DgfError(ln, "duplicate script block");
            saw_script = in_script = true;
            doc.script = ScriptBlock{};
        } else if (kw == "config") {
            if (tk.size() != 2 || tk[1].find('=') == std::string::npos)
                throw DgfError(ln, "config line needs KEY=VALUE");
            auto eq = tk[1].find('=');
            doc.config[tk[1].substr(0, eq)] = tk[1].substr(eq + 1);
        } else {
            throw DgfError(ln, "unknown directive '" + kw + "'");
        }
    }
    if (in_cert) throw DgfError(ln, "unterminated cert block");
    if (in_script) throw DgfError(ln, "unterminated script block");

    try {
        doc.graph = Digraph(std::move(verts), std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw DgfError(0, e.what());
    }

    for (auto& [toks, rln] : pending_rot) {
        if (toks.empty()) throw DgfError(rln, "rot line needs a vertex");
        VertexId v = to_int(toks[0], rln);
        if (!doc.graph.has_vertex(v)) throw DgfError(rln, "rot references unknown vertex");
        std::vector<EdgeId> order;
        for (std::size_t i = 1; i < toks.size(); ++i) {
            EdgeId e = to_int(toks[i], rln);
            if (!doc.graph.has_edge(e)) throw DgfError(rln, "rot references unknown edge");
            order.push_back(e);
        }
        doc.rotation[v] = std::move(order);
    }

    for (auto& pp : pending_paths) {
        DirectedPath p;
        p.circuit = pp.circuit;
        if (pp.toks.size() % 2 == 0)
            throw DgfError(pp.line, "path needs alternating v e v ... v");
        for (std::size_t i = 0; i < pp.toks.size(); ++i) {
            int x = to_int(pp.toks[i], pp.line);
            if (i % 2 == 0)
                p.verts.push_back(x);
            else
                p.edges.push_back(x);
        }
        std::string why;
        if (!is_valid_path(doc.graph, p, &why))
            throw DgfError(pp.line, "invalid path '" + pp.name + "': " + why);
        for (const auto& q : doc.paths)
            if (q.name == pp.name) throw DgfError(pp.line, "duplicate path name " + pp.name);
        doc.paths.push_back({pp.name, std::move(p)});
    }

    for (const auto& [name, vs] : doc.marks)
        for (VertexId v : vs)
            if (!doc.graph.has_vertex(v)) throw DgfError(0, "mark references unknown vertex");
    for (const auto& [name, vs] : doc.sets)
        for (VertexId v : vs)
            if (!doc.graph.has_vertex(v)) throw DgfError(0, "set references unknown vertex");
    for (const auto& gh : doc.grids) {
        for (const auto& lists : {gh.circuits, gh.horizontals, gh.verticals})
            for (const auto& n : lists)
                if (!doc.find_path(n)) throw DgfError(0, "grid references unknown path " + n);
    }
    if (doc.cert) {
        auto& es = doc.cert->entries;
        std::sort(es.begin(), es.end(),
                  [](const CertEntry& a, const CertEntry& b) { return a.z < b.z; });
    }
    return doc;
}

std::string serialize_cert(const CertBlock& cert) {
    std::ostringstream out;
    out << "cert\n";
    out << "order: " << cert.order << "\n";
    auto entries = cert.entries;
    std::sort(entries.begin(), entries.end(),
              [](const CertEntry& a, const CertEntry& b) { return a.z < b.z; });
    for (const auto& ce : entries) {
        out << "Z:";
        for (VertexId v : ce.z) out << " " << v;
        out << " -> " << ce.rep << "\n";
    }
    out << "endcert\n";
    return out.str();
}

std::string serialize_dgf(const DgfDocument& doc) {
    std::ostringstream out;
    out << "digraph " << doc.name << "\n";
    for (VertexId v : doc.graph.vertices()) out << "v " << v << "\n";
    for (const Edge& e : doc.graph.edges())
        out << "e " << e.id << " " << e.tail << " " << e.head << "\n";
    for (const auto& [v, order] : doc.rotation) {
        out << "rot " << v;
        for (EdgeId e : order) out << " " << e;
        out << "\n";
    }
    auto emit_mark = [&](const std::string& name) {
        auto it = doc.marks.find(name);
        if (it == doc.marks.end()) return;
        out << "mark " << name;
        for (VertexId v : it->second) out << " " << v;
        out << "\n";
    };
    for (const char* role : {"T", "L", "B", "R"}) emit_mark(role);
    for (const auto& [name, vs] : doc.marks) {
        if (name == "T" || name == "L" || name == "B" || name == "R") continue;
        out << "mark " << name;
        for (VertexId v : vs) out << " " << v;
        out << "\n";
    }
    for (const auto& [name, vs] : doc.sets) {
        out << "set " << name;
        for (VertexId v : vs) out << " " << v;
        out << "\n";
    }
    auto named = doc.paths;
    std::sort(named.begin(), named.end(),
              [](const NamedPath& a, const NamedPath& b) { return a.name < b.name; });
    for (const auto& np : named) {
        out << (np.path.circuit ? "circuit " : "path ") << np.name;
        for (std::size_t i = 0; i < np.path.verts.size(); ++i) {
            out << " " << np.path.verts[i];
            if (i < np.path.edges.size()) out << " " << np.path.edges[i];
        }
        out << "\n";
    }
    for (const auto& gh : doc.grids) {
        out << "grid " << gh.flavor << " " << gh.n;
        if (gh.flavor == "cyl") {
            for (const auto& n : gh.circuits) out << " " << n;
        } else {
            out << " h:";
            for (const auto& n : gh.horizontals) out << " " << n;
            out << " v:";
            for (const auto& n : gh.verticals) out << " " << n;
        }
        out << "\n";
    }
    if (doc.cert) out << serialize_cert(*doc.cert);
    for (const auto& [k, v] : doc.config) out << "config " << k << "=" << v << "\n";
    if (doc.script) {
        out << "script\n";
        for (const auto& st : doc.script->steps) {
            switch (st.kind) {
                case StepKind::DeleteVertex: out << "del v " << st.id << "\n"; break;
                case StepKind::DeleteEdge: out << "del e " << st.id << "\n"; break;
                case StepKind::Contract: out << "contract " << st.id << "\n"; break;
            }
        }
        for (const auto& [v, p] : doc.script->final_map) out << "map " << v << " " << p << "\n";
        out << "endscript\n";
    }
    return out.str();
}

}  // namespace digrid
