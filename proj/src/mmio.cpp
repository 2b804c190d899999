#include "sdmac/mmio.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace sdmac {

void mm_write(std::ostream& os, const CsrMatrix& a, MmKind kind) {
  const bool sym = kind == MmKind::Symmetric;
  index_t count = 0;
  if (sym) {
    for (index_t r = 0; r < a.nrows; ++r)
      for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
        if (a.col_idx[k] <= r) ++count;
  } else {
    count = a.nnz();
  }
  os << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << "\n";
  os << a.nrows << " " << a.ncols << " " << count << "\n";
  os << std::setprecision(17);
  for (index_t r = 0; r < a.nrows; ++r)
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      if (sym && a.col_idx[k] > r) continue;
      os << (r + 1) << " " << (a.col_idx[k] + 1) << " " << a.values[k] << "\n";
    }
}

void mm_write_file(const std::string& path, const CsrMatrix& a, MmKind kind) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("mm_write_file: cannot open " + path);
  mm_write(f, a, kind);
}

CsrMatrix mm_read(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("mm_read: empty stream");
  std::istringstream header(line);
  std::string banner, object, format, field, kind;
  header >> banner >> object >> format >> field >> kind;
  if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate" ||
      field != "real")
    throw std::runtime_error("mm_read: unsupported header: " + line);
  const bool sym = kind == "symmetric";
  if (!sym && kind != "general") throw std::runtime_error("mm_read: unsupported kind " + kind);

  while (std::getline(is, line))
    if (!line.empty() && line[0] != '%') break;
  index_t nrows, ncols;
  long long nnz;
  {
    std::istringstream sz(line);
    if (!(sz >> nrows >> ncols >> nnz)) throw std::runtime_error("mm_read: bad size line");
  }
  CsrBuilder b(nrows, ncols);
  for (long long k = 0; k < nnz; ++k) {
    index_t r, c;
    double v;
    if (!(is >> r >> c >> v)) throw std::runtime_error("mm_read: truncated entries");
    b.add(r - 1, c - 1, v);
    if (sym && r != c) b.add(c - 1, r - 1, v);
  }
  return b.build();
}

CsrMatrix mm_read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("mm_read_file: cannot open " + path);
  return mm_read(f);
}

}  // namespace sdmac
