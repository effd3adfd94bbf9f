#include "medvox/nifti.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include "medvox/byte_io.hpp"
#include "medvox/errors.hpp"

namespace medvox {

namespace {

constexpr std::size_t kHeaderSize = 348;
constexpr std::size_t kDataOffset = 352;

template <class T>
T peek(std::span<const std::uint8_t> b, std::size_t off) {
    bytes::Reader r(b.subspan(off));
    return r.get<T>();
}

template <class T>
void poke(std::vector<std::uint8_t> &b, std::size_t off, T v) {
    std::vector<std::uint8_t> tmp;
    bytes::put_le(tmp, v);
    std::copy(tmp.begin(), tmp.end(), b.begin() + static_cast<std::ptrdiff_t>(off));
}

int bytes_per_voxel(std::int16_t datatype) {
    switch (datatype) {
    case nifti_dtype::kUint8: return 1;
    case nifti_dtype::kInt16: return 2;
    case nifti_dtype::kFloat32: return 4;
    case nifti_dtype::kFloat64: return 8;
    default: return 0;
    }
}

} // namespace

NiftiHeader parse_nifti_header(std::span<const std::uint8_t> b) {
    if (b.size() >= 2 && b[0] == 0x1F && b[1] == 0x8B) {
        throw FormatError(FormatErrc::CompressedNifti,
                          "compressed NIfTI unsupported: decompress the .nii.gz file (e.g. gunzip) and retry");
    }
    if (b.size() < kHeaderSize) throw FormatError(FormatErrc::Truncated, "NIfTI header truncated");
    if (peek<std::int32_t>(b, 0) != 348) {
        throw FormatError(FormatErrc::BadMagic, "sizeof_hdr is not 348 (big-endian or not NIfTI-1)");
    }
    NiftiHeader h;
    for (int i = 0; i < 4; ++i) h.magic[i] = static_cast<char>(b[344 + i]);
    if (!(h.magic[0] == 'n' && h.magic[1] == '+' && h.magic[2] == '1' && h.magic[3] == '\0')) {
        throw FormatError(FormatErrc::BadMagic, "NIfTI magic is not \"n+1\" (only single-file NIfTI-1 is supported)");
    }
    for (int i = 0; i < 8; ++i) h.dim[i] = peek<std::int16_t>(b, 40 + 2 * i);
    h.datatype = peek<std::int16_t>(b, 70);
    h.bitpix = peek<std::int16_t>(b, 72);
    for (int i = 0; i < 8; ++i) h.pixdim[i] = peek<float>(b, 76 + 4 * i);
    h.vox_offset = peek<float>(b, 108);
    h.scl_slope = peek<float>(b, 112);
    h.scl_inter = peek<float>(b, 116);
    h.qform_code = peek<std::int16_t>(b, 252);
    h.sform_code = peek<std::int16_t>(b, 254);
    h.quatern_b = peek<float>(b, 256);
    h.quatern_c = peek<float>(b, 260);
    h.quatern_d = peek<float>(b, 264);
    h.qoffset_x = peek<float>(b, 268);
    h.qoffset_y = peek<float>(b, 272);
    h.qoffset_z = peek<float>(b, 276);
    for (int i = 0; i < 4; ++i) {
        h.srow_x[i] = peek<float>(b, 280 + 4 * i);
        h.srow_y[i] = peek<float>(b, 296 + 4 * i);
        h.srow_z[i] = peek<float>(b, 312 + 4 * i);
    }
    return h;
}

std::vector<std::uint8_t> encode_nifti_header(const NiftiHeader &h) {
    std::vector<std::uint8_t> b(kDataOffset, 0);
    poke<std::int32_t>(b, 0, 348);
    b[38] = 'r'; // regular
    for (int i = 0; i < 8; ++i) poke(b, 40 + 2 * i, h.dim[i]);
    poke(b, 70, h.datatype);
    poke(b, 72, h.bitpix);
    for (int i = 0; i < 8; ++i) poke(b, 76 + 4 * i, h.pixdim[i]);
    poke(b, 108, h.vox_offset);
    poke(b, 112, h.scl_slope);
    poke(b, 116, h.scl_inter);
    b[123] = 2; // xyzt_units: millimetres
    poke(b, 252, h.qform_code);
    poke(b, 254, h.sform_code);
    poke(b, 256, h.quatern_b);
    poke(b, 260, h.quatern_c);
    poke(b, 264, h.quatern_d);
    poke(b, 268, h.qoffset_x);
    poke(b, 272, h.qoffset_y);
    poke(b, 276, h.qoffset_z);
    for (int i = 0; i < 4; ++i) {
        poke(b, 280 + 4 * i, h.srow_x[i]);
        poke(b, 296 + 4 * i, h.srow_y[i]);
        poke(b, 312 + 4 * i, h.srow_z[i]);
    }
    for (int i = 0; i < 4; ++i) b[344 + i] = static_cast<std::uint8_t>(h.magic[i]);
    // bytes 348..351: empty extension flag
    return b;
}

Mat4 nifti_affine(const NiftiHeader &h) {
    Mat4 a = Mat4::identity();
    if (h.sform_code > 0) {
        for (int c = 0; c < 4; ++c) {
            a(0, c) = h.srow_x[c];
            a(1, c) = h.srow_y[c];
            a(2, c) = h.srow_z[c];
        }
        return a;
    }
    const double dx = h.pixdim[1] > 0 ? h.pixdim[1] : 1.0;
    const double dy = h.pixdim[2] > 0 ? h.pixdim[2] : 1.0;
    const double dz = h.pixdim[3] > 0 ? h.pixdim[3] : 1.0;
    if (h.qform_code > 0) {
        double b = h.quatern_b, c = h.quatern_c, d = h.quatern_d;
        double a2 = 1.0 - (b * b + c * c + d * d);
        double qa;
        if (a2 < 1e-7) {
            // Numerically a 180 degree rotation: a = 0 and (b, c, d) renormalised.
            const double n = std::sqrt(b * b + c * c + d * d);
            b /= n;
            c /= n;
            d /= n;
            qa = 0.0;
        } else {
            qa = std::sqrt(a2);
        }
        const double qfac = h.pixdim[0] < 0 ? -1.0 : 1.0;
        const double R[3][3] = {
            {qa * qa + b * b - c * c - d * d, 2 * (b * c - qa * d), 2 * (b * d + qa * c)},
            {2 * (b * c + qa * d), qa * qa + c * c - b * b - d * d, 2 * (c * d - qa * b)},
            {2 * (b * d - qa * c), 2 * (c * d + qa * b), qa * qa + d * d - c * c - b * b},
        };
        const double scale[3] = {dx, dy, dz * qfac};
        for (int r = 0; r < 3; ++r) {
            for (int k = 0; k < 3; ++k) a(r, k) = R[r][k] * scale[k];
        }
        a(0, 3) = h.qoffset_x;
        a(1, 3) = h.qoffset_y;
        a(2, 3) = h.qoffset_z;
        return a;
    }
    return Mat4::diagonal(dx, dy, dz);
}

MetaVolume nifti_decode(std::span<const std::uint8_t> bytes, const std::string &name) {
    const NiftiHeader h = parse_nifti_header(bytes);
    const int ndim = h.dim[0];
    if (ndim < 1 || ndim > 7) throw FormatError(FormatErrc::Malformed, "NIfTI dim[0] out of range");
    const int bpv = bytes_per_voxel(h.datatype);
    if (bpv == 0) {
        throw FormatError(FormatErrc::UnsupportedDtype,
                          "unsupported NIfTI datatype " + std::to_string(h.datatype) + " (supported: 2, 4, 16, 64)");
    }

    std::vector<std::int64_t> spatial;
    std::int64_t channels = 1;
    for (int i = 1; i <= std::min(ndim, 3); ++i) {
        if (h.dim[i] < 1) throw FormatError(FormatErrc::Malformed, "NIfTI dimension < 1");
        spatial.push_back(h.dim[i]);
    }
    for (int i = 4; i <= ndim; ++i) {
        if (h.dim[i] < 1) throw FormatError(FormatErrc::Malformed, "NIfTI dimension < 1");
        channels *= h.dim[i];
    }
    // Vector images are stored with spatial dims padded to three.
    if (channels > 1) {
        while (spatial.size() < 3) spatial.push_back(1);
    }

    std::vector<std::int64_t> shape{channels};
    shape.insert(shape.end(), spatial.begin(), spatial.end());
    MetaVolume v(shape);

    const auto offset = static_cast<std::size_t>(h.vox_offset);
    const auto count = static_cast<std::size_t>(v.data.size());
    if (offset < kHeaderSize || bytes.size() < offset + count * static_cast<std::size_t>(bpv)) {
        throw FormatError(FormatErrc::Truncated, "NIfTI data section truncated");
    }

    const bool scale = h.scl_slope != 0.0f && !(h.scl_slope == 1.0f && h.scl_inter == 0.0f);
    bytes::Reader r(bytes.subspan(offset, count * static_cast<std::size_t>(bpv)));

    const auto d = v.dims3();
    // NIfTI stores x fastest; our layout has the last spatial axis fastest.
    for (std::int64_t c = 0; c < channels; ++c) {
        for (std::int64_t k = 0; k < d[2]; ++k) {
            for (std::int64_t j = 0; j < d[1]; ++j) {
                for (std::int64_t i = 0; i < d[0]; ++i) {
                    double x = 0.0;
                    float f32 = 0.0f;
                    bool raw_f32 = false;
                    switch (h.datatype) {
                    case nifti_dtype::kUint8: x = r.get<std::uint8_t>(); break;
                    case nifti_dtype::kInt16: x = r.get<std::int16_t>(); break;
                    case nifti_dtype::kFloat32:
                        f32 = r.get<float>();
                        raw_f32 = true;
                        break;
                    default: x = r.get<double>(); break;
                    }
                    float out;
                    if (raw_f32 && !scale) {
                        out = f32;
                    } else {
                        if (raw_f32) x = f32;
                        if (scale) x = static_cast<double>(h.scl_slope) * x + static_cast<double>(h.scl_inter);
                        out = static_cast<float>(x);
                    }
                    v.data[static_cast<std::size_t>(((c * d[0] + i) * d[1] + j) * d[2] + k)] = out;
                }
            }
        }
    }

    v.affine = nifti_affine(h);
    if (std::abs(v.affine.det3()) < 1e-12) throw FormatError(FormatErrc::Malformed, "NIfTI affine is singular");
    v.meta.set("sys.filename", name);
    v.meta.set("sys.original_datatype", static_cast<double>(h.datatype));
    std::vector<double> pix;
    for (int i = 1; i <= ndim; ++i) pix.push_back(h.pixdim[i]);
    v.meta.set("sys.pixdim", pix);
    return v;
}

std::vector<std::uint8_t> nifti_encode(const MetaVolume &v) {
    v.validate();
    const auto d = v.dims3();
    const std::int64_t channels = v.channels();
    for (auto x : v.shape) {
        if (x > 32767) throw IoError("dimension too large for NIfTI-1");
    }

    NiftiHeader h;
    h.dim.fill(1);
    if (channels == 1) {
        h.dim[0] = static_cast<std::int16_t>(v.spatial_rank());
    } else {
        h.dim[0] = 4;
        h.dim[4] = static_cast<std::int16_t>(channels);
    }
    for (int i = 0; i < 3; ++i) h.dim[i + 1] = static_cast<std::int16_t>(d[i]);
    h.datatype = nifti_dtype::kFloat32;
    h.bitpix = 32;
    const Vec3 sp = affine_spacing(v.affine);
    h.pixdim.fill(1.0f);
    for (int i = 0; i < 3; ++i) h.pixdim[i + 1] = static_cast<float>(sp[i]);
    h.vox_offset = static_cast<float>(kDataOffset);
    h.scl_slope = 1.0f;
    h.scl_inter = 0.0f;
    h.qform_code = 0;
    h.sform_code = 1;
    for (int c = 0; c < 4; ++c) {
        h.srow_x[c] = static_cast<float>(v.affine(0, c));
        h.srow_y[c] = static_cast<float>(v.affine(1, c));
        h.srow_z[c] = static_cast<float>(v.affine(2, c));
    }

    auto out = encode_nifti_header(h);
    out.reserve(out.size() + v.data.size() * 4);
    for (std::int64_t c = 0; c < channels; ++c) {
        for (std::int64_t k = 0; k < d[2]; ++k) {
            for (std::int64_t j = 0; j < d[1]; ++j) {
                for (std::int64_t i = 0; i < d[0]; ++i) {
                    bytes::put_le(out, v.data[static_cast<std::size_t>(((c * d[0] + i) * d[1] + j) * d[2] + k)]);
                }
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path &path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

MetaVolume nifti_load(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path)) throw IoError("no such file: '" + path.string() + "'");
    const auto bytes = read_file_bytes(path);
    return nifti_decode(bytes, path.filename().string());
}

void nifti_save(const MetaVolume &v, const std::filesystem::path &path) { write_file_bytes(path, nifti_encode(v)); }

} // namespace medvox
