#include "deg/vector_io.hpp"

#include "binary_io.hpp"

namespace deg {

void write_hvec(const std::string &path, const VectorSet &vectors) {
  io::Writer w;
  w.magic("HVEC");
  w.u32(static_cast<std::uint32_t>(vectors.size()));
  w.u32(static_cast<std::uint32_t>(vectors.dim()));
  for (float x : vectors.data())
    w.f32(x);
  w.save(path);
}

VectorSet read_hvec(const std::string &path) {
  auto r = io::Reader::open(path);
  r.expect_magic("HVEC");
  std::uint32_t count = r.u32();
  std::uint32_t dim = r.u32();
  if (dim == 0)
    throw Error("'" + path + "': zero dimension");
  std::size_t total = static_cast<std::size_t>(count) * dim;
  r.need(total * 4);
  std::vector<float> data(total);
  for (auto &x : data)
    x = r.f32();
  r.expect_end();
  return VectorSet(dim, std::move(data));
}

} // namespace deg
