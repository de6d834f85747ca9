//! PNG load and save.

use std::path::Path;

use crate::error::Result;
use crate::imgproc::{to_grayscale, GrayImage, RgbImage};

/// Loads any PNG as 8-bit grayscale. Color images are converted with BT.601
/// weights; alpha is dropped.
pub fn load_png(path: impl AsRef<Path>) -> Result<GrayImage> {
    let img = image::open(path.as_ref())?;
    decode_dynamic(img)
}

/// Decodes PNG bytes to grayscale.
pub fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)?;
    decode_dynamic(img)
}

fn decode_dynamic(img: image::DynamicImage) -> Result<GrayImage> {
    if let image::DynamicImage::ImageLuma8(g) = img {
        let (w, h) = g.dimensions();
        return GrayImage::new(w, h, g.into_raw());
    }
    let rgb = img.to_rgb8();
    let (w, h) = rgb.dimensions();
    let rgb = RgbImage::new(w, h, rgb.into_raw())?;
    to_grayscale(&rgb)
}

pub fn save_png(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    image::save_buffer_with_format(
        path.as_ref(),
        img.as_raw(),
        img.width(),
        img.height(),
        image::ExtendedColorType::L8,
        image::ImageFormat::Png,
    )?;
    Ok(())
}

pub fn encode_png(img: &GrayImage) -> Result<Vec<u8>> {
    let mut out = std::io::Cursor::new(Vec::new());
    image::write_buffer_with_format(
        &mut out,
        img.as_raw(),
        img.width(),
        img.height(),
        image::ExtendedColorType::L8,
        image::ImageFormat::Png,
    )?;
    Ok(out.into_inner())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let img = GrayImage::from_fn(7, 5, |x, y| (x * 30 + y) as u8);
        let bytes = encode_png(&img).unwrap();
        assert_eq!(decode_png(&bytes).unwrap(), img);

        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.png");
        save_png(&img, &p).unwrap();
        assert_eq!(load_png(&p).unwrap(), img);
    }

    #[test]
    fn color_is_converted() {
        let mut buf = image::RgbImage::new(2, 1);
        buf.put_pixel(0, 0, image::Rgb([255, 255, 255]));
        buf.put_pixel(1, 0, image::Rgb([255, 0, 0]));
        let mut bytes = std::io::Cursor::new(Vec::new());
        buf.write_to(&mut bytes, image::ImageFormat::Png).unwrap();
        let g = decode_png(bytes.get_ref()).unwrap();
        assert_eq!(g.as_raw(), &[255, 76]);
    }

    #[test]
    fn garbage_is_an_error() {
        assert!(decode_png(b"not a png").is_err());
    }
}
