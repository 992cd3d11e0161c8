#ifndef DIGRID_DGF_HPP
#define DIGRID_DGF_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "digrid/digraph.hpp"

namespace digrid {

struct DgfError : std::runtime_error {
    int line;
    DgfError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct NamedPath {
    std::string name;
    DirectedPath path;
};

struct CertEntry {
    std::vector<VertexId> z;  // sorted
    VertexId rep;
};

struct CertBlock {
    int order = 0;
    std::vector<CertEntry> entries;  // sorted lexicographically by z
};

enum class StepKind { DeleteVertex, DeleteEdge, Contract };

struct ScriptStep {
    StepKind kind;
    int id;  // vertex or edge id
};

struct ScriptBlock {
    std::vector<ScriptStep> steps;
    std::map<VertexId, VertexId> final_map;  // surviving vertex -> pattern vertex
};

/// One parsed DGF document: digraph, optional embedding block, witness
/// blocks, optional certificate / config / script blocks.
struct DgfDocument {
    std::string name = "g";
    Digraph graph;
    std::map<VertexId, std::vector<EdgeId>> rotation;  // loops listed twice
    std::map<std::string, std::vector<VertexId>> marks;  // boundary roles T,L,B,R
    std::map<std::string, std::vector<VertexId>> sets;   // named vertex sets
    std::vector<NamedPath> paths;                        // paths and circuits, by name
    struct GridHeader {
        std::string flavor;  // cyl | plain | bubble
        int n = 0;
        std::vector<std::string> circuits;     // cyl
        std::vector<std::string> horizontals;  // plain/bubble
        std::vector<std::string> verticals;
    };
    std::vector<GridHeader> grids;
    std::optional<CertBlock> cert;
    std::map<std::string, std::string> config;
    std::optional<ScriptBlock> script;

    const NamedPath* find_path(const std::string& n) const;
    bool has_embedding() const { return !rotation.empty(); }
};

DgfDocument parse_dgf(const std::string& text);
std::string serialize_dgf(const DgfDocument& doc);

std::string serialize_cert(const CertBlock& cert);

}  // namespace digrid

#endif
