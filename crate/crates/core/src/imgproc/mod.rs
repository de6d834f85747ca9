//! Image primitives shared by every stage of the pipeline.

mod contours;
mod filter;
mod image;
mod morphology;
mod rect;
mod threshold;
mod warp;

pub use contours::{connected_components, find_contours, shoelace_area, Component, Contour};
pub use filter::{
    box_blur, laplacian_variance, median_filter, resize_nearest, resize_nearest_to, to_grayscale,
};
pub(crate) use filter::nearest_source;
pub use image::{BinaryImage, GrayImage, RectI, RgbImage};
pub use morphology::{
    dilate, dilate_gray, erode, erode_gray, opening, opening_gray, white_top_hat, Kernel,
    KernelShape,
};
pub use rect::{
    bounding_rect, convex_hull, min_area_rect, min_area_rect_points, points_bounding_rect,
    RotatedRect,
};
pub use threshold::{otsu_level, otsu_threshold};
pub use warp::{
    rotate_about_center, rotate_expand, rotate_onto, rotated_bounds, sample_bicubic,
    MAX_ROTATION_DEG,
};
