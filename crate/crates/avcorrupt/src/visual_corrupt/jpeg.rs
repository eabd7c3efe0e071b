//! JPEG-style lossy frame compression: YCbCr conversion with 4:2:0 chroma
//! subsampling, 8x8 block DCT, quality-scaled quantization tables, and the
//! inverse path. Fully deterministic — no randomness enters this transform.

use crate::dct::Dct;
use crate::media::{Frame, FrameSequence};

use super::VisualError;

/// ITU-T T.81 Annex K luminance quantization table.
const LUMA_TABLE: [u16; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// ITU-T T.81 Annex K chrominance quantization table.
const CHROMA_TABLE: [u16; 64] = [
    17, 18, 24, 47, 99, 99, 99, 99, //
    18, 21, 26, 66, 99, 99, 99, 99, //
    24, 26, 56, 99, 99, 99, 99, 99, //
    47, 66, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99,
];

/// libjpeg quality scaling for q < 50 (the only regime this codec uses).
fn scaled_table(base: &[u16; 64], quality: u8) -> [f64; 64] {
    let quality = quality.clamp(1, 50);
    let factor = 5000.0 / f64::from(quality);
    let mut out = [0.0; 64];
    for (o, &b) in out.iter_mut().zip(base) {
        *o = ((f64::from(b) * factor + 50.0) / 100.0).floor().clamp(1.0, 255.0);
    }
    out
}

pub fn jpeg_like_compress(
    seq: &FrameSequence,
    quality: u8,
) -> Result<FrameSequence, VisualError> {
    if seq.width() < 8 || seq.height() < 8 {
        return Err(VisualError::TooSmall {
            width: seq.width(),
            height: seq.height(),
        });
    }
    let luma_q = scaled_table(&LUMA_TABLE, quality);
    let chroma_q = scaled_table(&CHROMA_TABLE, quality);
    let dct = Dct::new(8);
    Ok(seq
        .map(|_, frame| compress_frame(frame, &luma_q, &chroma_q, &dct))
        .expect("dimensions preserved"))
}

fn compress_frame(frame: &Frame, luma_q: &[f64; 64], chroma_q: &[f64; 64], dct: &Dct) -> Frame {
    let (w, h) = (frame.width(), frame.height());

    // RGB -> YCbCr in the 0..255 domain (JFIF full range).
    let n = w * h;
    let mut y_plane = vec![0.0f64; n];
    let mut cb_plane = vec![0.0f64; n];
    let mut cr_plane = vec![0.0f64; n];
    for (i, px) in frame.data().chunks_exact(3).enumerate() {
        let r = f64::from(px[0]) * 255.0;
        let g = f64::from(px[1]) * 255.0;
        let b = f64::from(px[2]) * 255.0;
        y_plane[i] = 0.299 * r + 0.587 * g + 0.114 * b;
        cb_plane[i] = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0;
        cr_plane[i] = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0;
    }

    // 4:2:0 chroma: 2x2 box mean down, nearest up after coding.
    let cw = w.div_ceil(2);
    let ch = h.div_ceil(2);
    let downsample = |plane: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0f64; cw * ch];
        for by in 0..ch {
            for bx in 0..cw {
                let mut acc = 0.0;
                let mut count = 0.0;
                for dy in 0..2 {
                    for dx in 0..2 {
                        let sx = (bx * 2 + dx).min(w - 1);
                        let sy = (by * 2 + dy).min(h - 1);
                        acc += plane[sy * w + sx];
                        count += 1.0;
                    }
                }
                out[by * cw + bx] = acc / count;
            }
        }
        out
    };
    let cb_small = downsample(&cb_plane);
    let cr_small = downsample(&cr_plane);

    let y_coded = code_plane(&y_plane, w, h, luma_q, dct);
    let cb_coded = code_plane(&cb_small, cw, ch, chroma_q, dct);
    let cr_coded = code_plane(&cr_small, cw, ch, chroma_q, dct);

    let mut data = vec![0.0f32; n * 3];
    for yy in 0..h {
        for xx in 0..w {
            let i = yy * w + xx;
            let ci = (yy / 2) * cw + (xx / 2);
            let y = y_coded[i];
            let cb = cb_coded[ci] - 128.0;
            let cr = cr_coded[ci] - 128.0;
            let r = y + 1.402 * cr;
            let g = y - 0.344136 * cb - 0.714136 * cr;
            let b = y + 1.772 * cb;
            data[i * 3] = (r / 255.0) as f32;
            data[i * 3 + 1] = (g / 255.0) as f32;
            data[i * 3 + 2] = (b / 255.0) as f32;
        }
    }
    let mut out = Frame::new(w, h, data).expect("dimensions preserved");
    out.clamp_unit();
    out
}

/// Blockwise DCT/quantize/dequantize/IDCT of one plane. Edge blocks are
/// padded by replication and cropped back afterwards.
fn code_plane(plane: &[f64], w: usize, h: usize, qtable: &[f64; 64], dct: &Dct) -> Vec<f64> {
    let bw = w.div_ceil(8);
    let bh = h.div_ceil(8);
    let mut out = vec![0.0f64; w * h];
    let mut block = [0.0f64; 64];
    let mut tmp = [0.0f64; 64];

    for by in 0..bh {
        for bx in 0..bw {
            for dy in 0..8 {
                for dx in 0..8 {
                    let sx = (bx * 8 + dx).min(w - 1);
                    let sy = (by * 8 + dy).min(h - 1);
                    block[dy * 8 + dx] = plane[sy * w + sx] - 128.0;
                }
            }
            forward_2d(&mut block, &mut tmp, dct);
            for (v, &q) in block.iter_mut().zip(qtable) {
                *v = (*v / q).round() * q;
            }
            inverse_2d(&mut block, &mut tmp, dct);
            for dy in 0..8 {
                for dx in 0..8 {
                    let sx = bx * 8 + dx;
                    let sy = by * 8 + dy;
                    if sx < w && sy < h {
                        out[sy * w + sx] = block[dy * 8 + dx] + 128.0;
                    }
                }
            }
        }
    }
    out
}

fn forward_2d(block: &mut [f64; 64], tmp: &mut [f64; 64], dct: &Dct) {
    let mut row_out = [0.0f64; 8];
    for r in 0..8 {
        dct.forward(&block[r * 8..r * 8 + 8], &mut row_out);
        tmp[r * 8..r * 8 + 8].copy_from_slice(&row_out);
    }
    let mut col = [0.0f64; 8];
    for c in 0..8 {
        for r in 0..8 {
            col[r] = tmp[r * 8 + c];
        }
        dct.forward(&col, &mut row_out);
        for r in 0..8 {
            block[r * 8 + c] = row_out[r];
        }
    }
}

fn inverse_2d(block: &mut [f64; 64], tmp: &mut [f64; 64], dct: &Dct) {
    let mut col_out = [0.0f64; 8];
    let mut col = [0.0f64; 8];
    for c in 0..8 {
        for r in 0..8 {
            col[r] = block[r * 8 + c];
        }
        dct.inverse(&col, &mut col_out);
        for r in 0..8 {
            tmp[r * 8 + c] = col_out[r];
        }
    }
    for r in 0..8 {
        dct.inverse(&tmp[r * 8..r * 8 + 8], &mut col_out);
        block[r * 8..r * 8 + 8].copy_from_slice(&col_out);
    }
}

/// Peak signal-to-noise ratio between two equally sized frames, in dB.
pub fn psnr(a: &Frame, b: &Frame) -> f64 {
    assert_eq!(a.width(), b.width());
    assert_eq!(a.height(), b.height());
    let mse: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| (f64::from(x) - f64::from(y)).powi(2))
        .sum::<f64>()
        / a.data().len() as f64;
    if mse == 0.0 {
        return f64::INFINITY;
    }
    10.0 * (1.0 / mse).log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_frame_stays_constant() {
        // DC-only blocks quantize identically everywhere, so a flat frame
        // stays flat (the level may shift slightly from DC quantization).
        let seq = FrameSequence::new(vec![Frame::constant(32, 32, [0.4, 0.6, 0.2])]).unwrap();
        let out = jpeg_like_compress(&seq, 7).unwrap();
        let first = out.frames()[0].pixel(0, 0);
        for px in out.frames()[0].data().chunks_exact(3) {
            for c in 0..3 {
                assert!((px[c] - first[c]).abs() < 1e-6, "not uniform");
            }
        }
        for c in 0..3 {
            assert!(
                (first[c] - seq.frames()[0].pixel(0, 0)[c]).abs() < 0.05,
                "levels drifted more than DC quantization allows"
            );
        }
    }

    #[test]
    fn too_small_frames_are_rejected() {
        let seq = FrameSequence::new(vec![Frame::constant(4, 4, [0.5; 3])]).unwrap();
        assert!(matches!(
            jpeg_like_compress(&seq, 25),
            Err(VisualError::TooSmall { .. })
        ));
    }

    #[test]
    fn lower_quality_means_lower_psnr() {
        let frame = crate::synth::natural_test_frame(64, 64, 3);
        let seq = FrameSequence::new(vec![frame.clone()]).unwrap();
        let psnr_q25 = psnr(
            &jpeg_like_compress(&seq, 25).unwrap().frames()[0],
            &frame,
        );
        let psnr_q7 = psnr(&jpeg_like_compress(&seq, 7).unwrap().frames()[0], &frame);
        assert!(psnr_q7 < psnr_q25, "{psnr_q7} !< {psnr_q25}");
    }

    #[test]
    fn severity_five_psnr_in_expected_band() {
        let frame = crate::synth::natural_test_frame(96, 96, 5);
        let seq = FrameSequence::new(vec![frame.clone()]).unwrap();
        let out = jpeg_like_compress(&seq, 7).unwrap();
        let db = psnr(&out.frames()[0], &frame);
        assert!((18.0..=32.0).contains(&db), "psnr {db}");
    }

    #[test]
    fn recompression_is_gentler_than_first_pass() {
        let frame = crate::synth::natural_test_frame(64, 64, 9);
        let seq = FrameSequence::new(vec![frame]).unwrap();
        let once = jpeg_like_compress(&seq, 25).unwrap();
        let twice = jpeg_like_compress(&once, 25).unwrap();
        let first = psnr(&once.frames()[0], &seq.frames()[0]);
        let second = psnr(&twice.frames()[0], &once.frames()[0]);
        assert!(second >= first, "{second} < {first}");
    }
}
