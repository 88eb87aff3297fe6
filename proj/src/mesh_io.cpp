#include <bemrelax/mesh.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bemrelax::mesh {

namespace {

void put_double(std::ostream& out, double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.write(buf, res.ptr - buf);
}

bool next_data_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] != '#') return true;
  }
  return false;
}

}  // namespace

void write_mesh(const TriMesh& mesh, std::ostream& out) {
  out << mesh.vertices().size() << ' ' << mesh.panels().size() << '\n';
  for (const auto& v : mesh.vertices()) {
    put_double(out, v.x);
    out << ' ';
    put_double(out, v.y);
    out << ' ';
    put_double(out, v.z);
    out << '\n';
  }
  for (const auto& p : mesh.panels()) out << p.v[0] << ' ' << p.v[1] << ' ' << p.v[2] << ' ' << p.tag << '\n';
}

void write_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mesh: cannot open " + path.string());
  write_mesh(mesh, out);
  if (!out) throw std::runtime_error("write_mesh: write failed for " + path.string());
}

TriMesh read_mesh(std::istream& in, MeshReadInfo* info) {
  std::string line;
  int lineno = 0;
  if (!next_data_line(in, line, lineno)) throw MeshFormatError("mesh file is empty");

  long long nv = -1, np = -1;
  {
    std::istringstream hdr(line);
    std::string extra;
    if (!(hdr >> nv >> np) || (hdr >> extra) || nv < 3 || np < 1)
      throw MeshFormatError("malformed header on line " + std::to_string(lineno) + ": expected 'nv np'");
  }

  std::vector<Vec3> verts;
  verts.reserve(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    if (!next_data_line(in, line, lineno))
      throw MeshFormatError("expected " + std::to_string(nv) + " vertices, found " + std::to_string(i));
    const char* p = line.data();
    const char* end = p + line.size();
    Vec3 v;
    for (int c = 0; c < 3; ++c) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      auto res = std::from_chars(p, end, v[c]);
      if (res.ec != std::errc())
        throw MeshFormatError("malformed vertex on line " + std::to_string(lineno));
      p = res.ptr;
    }
    verts.push_back(v);
  }

  std::vector<std::array<int, 3>> tris;
  std::vector<int> tags;
  tris.reserve(static_cast<std::size_t>(np));
  for (long long t = 0; t < np; ++t) {
    if (!next_data_line(in, line, lineno))
      throw MeshFormatError("expected " + std::to_string(np) + " panels, found " + std::to_string(t));
    std::istringstream row(line);
    long long i, j, k;
    int tag = 0;
    if (!(row >> i >> j >> k >> tag)) throw MeshFormatError("malformed panel on line " + std::to_string(lineno));
    for (long long idx : {i, j, k})
      if (idx < 0 || idx >= nv)
        throw MeshFormatError("vertex index " + std::to_string(idx) + " out of bounds on line " +
                              std::to_string(lineno));
    tris.push_back({static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)});
    tags.push_back(tag);
  }
  if (next_data_line(in, line, lineno))
    throw MeshFormatError("unexpected trailing data on line " + std::to_string(lineno));

  TriMesh mesh;
  try {
    mesh = TriMesh(std::move(verts), tris, tags);
  } catch (const std::invalid_argument& e) {
    throw MeshFormatError(e.what());
  }

  if (info) {
    auto check = validate(mesh);
    info->closed = check.closed;
    info->warning = check.closed ? std::string{} : "surface is not closed: " + check.diagnostic;
  }
  return mesh;
}

TriMesh read_mesh(const std::filesystem::path& path, MeshReadInfo* info) {
  std::ifstream in(path);
  if (!in) throw MeshFormatError("cannot open " + path.string());
  return read_mesh(in, info);
}

}  // namespace bemrelax::mesh
