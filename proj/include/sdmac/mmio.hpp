#pragma once
#include <iosfwd>
#include <string>

#include "sdmac/csr.hpp"

namespace sdmac {

enum class MmKind { General, Symmetric };

/// Coordinate-format Matrix Market, 1-based indices. Symmetric kind stores the
/// lower triangle only.
void mm_write(std::ostream& os, const CsrMatrix& a, MmKind kind = MmKind::General);
void mm_write_file(const std::string& path, const CsrMatrix& a, MmKind kind = MmKind::General);

CsrMatrix mm_read(std::istream& is);
CsrMatrix mm_read_file(const std::string& path);

}  // namespace sdmac
