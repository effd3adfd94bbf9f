#include <cmath>

#include "medvox/errors.hpp"
#include "medvox/spatial.hpp"

namespace medvox {

namespace detail {

Vec3 spatial_center(const std::vector<std::int64_t> &spatial) {
    Vec3 c{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < spatial.size() && i < 3; ++i) c[i] = (static_cast<double>(spatial[i]) - 1.0) / 2.0;
    return c;
}

Mat4 rotation_matrix(int rank, std::span<const double> angles) {
    auto plane = [](int a, int b, double theta) {
        Mat4 r = Mat4::identity();
        const double c = std::cos(theta), s = std::sin(theta);
        r(a, a) = c;
        r(a, b) = -s;
        r(b, a) = s;
        r(b, b) = c;
        return r;
    };
    if (rank == 2) {
        if (angles.size() != 1) throw TransformError("2D rotation takes exactly one angle");
        return plane(0, 1, angles[0]);
    }
    if (rank == 3) {
        if (angles.empty() || angles.size() > 3) throw TransformError("3D rotation takes one to three angles");
        const double a0 = angles[0];
        const double a1 = angles.size() > 1 ? angles[1] : 0.0;
        const double a2 = angles.size() > 2 ? angles[2] : 0.0;
        return plane(0, 1, a2) * plane(0, 2, a1) * plane(1, 2, a0);
    }
    throw TransformError("rotation needs 2 or 3 spatial dims");
}

} // namespace detail

namespace {

MetaVolume resample_traced(const MetaVolume &v, const std::vector<std::int64_t> &out_dims, const Mat4 &out_to_in,
                           const Interpolation &interp, std::string_view id, MetaMap extra) {
    TraceRecord rec = detail::begin_record(v, id);
    rec.extra = std::move(extra);
    rec.extra.set("out_to_in", detail::to_list(out_to_in));
    rec.extra.set("mode", std::string(to_string(interp.mode)));
    rec.extra.set("padding", std::string(to_string(interp.padding)));
    MetaVolume out = resample(v, out_dims, out_to_in, nullptr, interp);
    out.affine = v.affine * out_to_in;
    out.applied.push_back(std::move(rec));
    return out;
}

std::vector<double> per_axis(std::span<const double> values, int rank, double fallback, const char *what) {
    std::vector<double> out(static_cast<std::size_t>(rank), fallback);
    if (values.size() == 1) {
        std::fill(out.begin(), out.end(), values[0]);
    } else if (static_cast<int>(values.size()) == rank) {
        std::copy(values.begin(), values.end(), out.begin());
    } else if (!values.empty()) {
        throw TransformError(std::string(what) + ": expected 1 or " + std::to_string(rank) + " values");
    }
    return out;
}

Mat4 about_center(const Mat4 &fwd, const std::vector<std::int64_t> &spatial) {
    const Vec3 c = detail::spatial_center(spatial);
    return Mat4::translation(c) * fwd * Mat4::translation({-c[0], -c[1], -c[2]});
}

} // namespace

MetaVolume spacing_to(const MetaVolume &v, std::span<const double> new_spacing, const Interpolation &interp) {
    v.validate();
    const int rank = v.spatial_rank();
    const auto target = per_axis(new_spacing, rank, 1.0, "spacing");
    const Vec3 old_sp = affine_spacing(v.affine);
    std::vector<std::int64_t> dims = v.spatial_shape();
    Mat4 out_to_in = Mat4::identity();
    for (int i = 0; i < rank; ++i) {
        if (!(target[i] > 0.0)) throw TransformError("spacing must be > 0");
        const double ratio = target[i] / old_sp[i];
        out_to_in(i, i) = ratio;
        dims[i] = std::max<std::int64_t>(1, std::llround(static_cast<double>(dims[i]) * old_sp[i] / target[i]));
    }
    MetaMap extra;
    extra.set("pixdim", target);
    return resample_traced(v, dims, out_to_in, interp, spatial_id::kSpacing, std::move(extra));
}

MetaVolume rotate(const MetaVolume &v, std::span<const double> angles, const Interpolation &interp) {
    v.validate();
    const auto dims = v.spatial_shape();
    const Mat4 fwd = about_center(detail::rotation_matrix(v.spatial_rank(), angles), dims);
    MetaMap extra;
    extra.set("angles", std::vector<double>(angles.begin(), angles.end()));
    return resample_traced(v, dims, fwd.inverse(), interp, spatial_id::kRotate, std::move(extra));
}

MetaVolume zoom(const MetaVolume &v, std::span<const double> factors, const Interpolation &interp) {
    v.validate();
    const int rank = v.spatial_rank();
    const auto z = per_axis(factors, rank, 1.0, "zoom");
    Mat4 s = Mat4::identity();
    for (int i = 0; i < rank; ++i) {
        if (!(z[i] > 0.0)) throw TransformError("zoom factors must be > 0");
        s(i, i) = z[i];
    }
    const auto dims = v.spatial_shape();
    MetaMap extra;
    extra.set("factors", z);
    return resample_traced(v, dims, about_center(s, dims).inverse(), interp, spatial_id::kZoom, std::move(extra));
}

Mat4 affine_params_matrix(const AffineParams &p, const std::vector<std::int64_t> &spatial) {
    const int rank = static_cast<int>(spatial.size());
    Mat4 rot = Mat4::identity();
    if (!p.rotation.empty()) {
        if (rank == 1) throw TransformError("rotation needs 2 or 3 spatial dims");
        rot = detail::rotation_matrix(rank, p.rotation);
    }
    const auto sc = per_axis(p.scale, rank, 1.0, "scale");
    Mat4 scale = Mat4::identity();
    for (int i = 0; i < rank; ++i) {
        if (sc[i] == 0.0) throw TransformError("scale must be non-zero");
        scale(i, i) = sc[i];
    }
    Mat4 shear = Mat4::identity();
    if (!p.shear.empty()) {
        if (rank == 2 && p.shear.size() == 2) {
            shear(0, 1) = p.shear[0];
            shear(1, 0) = p.shear[1];
        } else if (rank == 3 && p.shear.size() == 6) {
            shear(0, 1) = p.shear[0];
            shear(0, 2) = p.shear[1];
            shear(1, 0) = p.shear[2];
            shear(1, 2) = p.shear[3];
            shear(2, 0) = p.shear[4];
            shear(2, 1) = p.shear[5];
        } else {
            throw TransformError("shear needs 2 values in 2D or 6 in 3D");
        }
    }
    const auto tr = per_axis(p.translation, rank, 0.0, "translation");
    Vec3 t{0.0, 0.0, 0.0};
    for (int i = 0; i < rank; ++i) t[i] = tr[i];
    return about_center(Mat4::translation(t) * rot * shear * scale, spatial);
}

MetaVolume affine_resample_matrix(const MetaVolume &v, const Mat4 &out_to_in, const Interpolation &interp,
                                  std::string_view transform_id) {
    v.validate();
    return resample_traced(v, v.spatial_shape(), out_to_in, interp, transform_id, {});
}

MetaVolume affine_resample(const MetaVolume &v, const AffineParams &params, const Interpolation &interp) {
    v.validate();
    const auto dims = v.spatial_shape();
    const Mat4 fwd = affine_params_matrix(params, dims);
    if (std::abs(fwd.det3()) < 1e-12) throw TransformError("affine parameters give a singular matrix");
    return resample_traced(v, dims, fwd.inverse(), interp, spatial_id::kAffine, {});
}

MetaVolume warp(const MetaVolume &v, const DisplacementField &field, const Interpolation &interp) {
    v.validate();
    const auto dims = v.spatial_shape();
    if (field.dims != dims) throw TransformError("displacement field shape does not match the volume");
    if (field.data.size() != static_cast<std::size_t>(field.rank() * field.voxels())) {
        throw TransformError("displacement field data length mismatch");
    }
    TraceRecord rec = detail::begin_record(v, spatial_id::kWarp);
    rec.extra.set("mode", std::string(to_string(interp.mode)));
    MetaVolume out = resample(v, dims, Mat4::identity(), &field, interp);
    out.applied.push_back(std::move(rec));
    return out;
}

} // namespace medvox
