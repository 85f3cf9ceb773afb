//! Builds the default Log-Gabor bank for a 256x256 image and prints where
//! each scale peaks, then saves one kernel as a PNG (DC at the centre).
//!
//!     cargo run --example filter_bank -- [out.png]

use mirror_axis::filterbank::{FilterBank, FilterBankParams};
use mirror_axis::Result;

fn main() -> Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "kernel.png".into());
    let (w, h) = (256, 256);
    let bank = FilterBank::new(w, h, FilterBankParams::default())?;
    println!("{} scales x {} orientations", bank.scales(), bank.orientations());

    for (s, &eta_s) in bank.scale_centres().iter().enumerate() {
        let radial = bank.radial(s);
        let best = (0..radial.len()).fold(0, |b, i| if radial[i] > radial[b] { i } else { b });
        println!(
            "scale {s:2}: centre {eta_s:.4} cycles/px, discrete peak {:.4}",
            bank.grid().eta()[best]
        );
    }

    let (s, o) = (3, 4);
    let kernel = bank.kernel(s, o);
    let img = image::GrayImage::from_fn(w as u32, h as u32, |x, y| {
        // shift so the zero frequency lands in the middle
        let kx = (x as usize + w / 2) % w;
        let ky = (y as usize + h / 2) % h;
        image::Luma([(kernel[bank.grid().index(kx, ky)] * 255.0).round() as u8])
    });
    mirror_axis::commands::save_png(img, out.as_ref())?;
    println!("kernel ({s}, {o}) written to {out}");
    Ok(())
}
