//! End-to-end checks through the public API only: every convention row run
//! through the complete array pipeline, linearity of the chain, and the
//! guard rails that refuse silently wrong setups.

use num_complex::Complex64;
use sphaural::hrtf::{encode_hrtf_for_convention, synth_hrtf};
use sphaural::oracle::{direct_binaural, integrate_sphere};
use sphaural::render::{convert_convention, plane_wave_density, render, simulate_missing_sign_defect};
use sphaural::sh::make_gauss_grid;
use sphaural::sphere::{
    scene_field_coefficients, simulate_surface_pressure, sma_encode, SphereError,
};
use sphaural::{
    ConventionSystem, Direction, Ear, PlaneWave, PlaneWaveScene, RadialFilterSpec, RenderDefect,
    ShFlavor, SphereSpec,
};
use std::f64::consts::PI;

fn row(r: u8) -> ConventionSystem {
    ConventionSystem::from_row(r).unwrap()
}

fn dir(c: f64, a: f64) -> Direction {
    Direction::new(c, a).unwrap()
}

fn two_wave_scene() -> PlaneWaveScene {
    PlaneWaveScene::new(vec![
        PlaneWave::new(Complex64::new(0.8, -0.2), dir(1.2, 0.7)).unwrap(),
        PlaneWave::new(Complex64::new(-0.1, 0.6), dir(2.2, 3.1)).unwrap(),
    ])
    .unwrap()
}

#[test]
fn every_row_survives_the_full_array_path() {
    // Simulate, encode, and render natively under each convention row; all
    // five must reproduce the direct oracle once brought to a common
    // transform sign.
    let n_max = 3u32;
    let sphere = SphereSpec::new(0.05, 343.0).unwrap();
    let frequencies = [1200.0, 2400.0];
    let scene = two_wave_scene();
    let array_grid = make_gauss_grid(n_max + 8).unwrap();
    let hrtf_grid = make_gauss_grid(n_max).unwrap();
    let synthetic = synth_hrtf(99, n_max, &frequencies, &hrtf_grid).unwrap();
    let want = direct_binaural(&scene, &synthetic).unwrap();
    let filter = RadialFilterSpec::new(150.0).unwrap();
    for r in 1..=5u8 {
        let sys = row(r);
        let pressure =
            simulate_surface_pressure(&scene, &sphere, &array_grid, &sys, &frequencies)
                .unwrap();
        let field = sma_encode(&pressure, &sys, n_max, &filter).unwrap();
        let hrtf = encode_hrtf_for_convention(&synthetic.set, &hrtf_grid, &sys, n_max).unwrap();
        let got = render(&field, &hrtf).unwrap().in_common_sign();
        for ear in Ear::BOTH {
            for (a, b) in want.ear(ear).iter().zip(got.ear(ear)) {
                assert!((a - b).norm() < 1e-7, "row {r} {ear}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn the_chain_is_linear_in_the_scene() {
    let n_max = 3u32;
    let grid = make_gauss_grid(n_max).unwrap();
    let frequencies = [900.0];
    let synthetic = synth_hrtf(123, n_max, &frequencies, &grid).unwrap();
    let sys = row(4);
    let hrtf = encode_hrtf_for_convention(&synthetic.set, &grid, &sys, n_max).unwrap();
    let w1 = PlaneWave::new(Complex64::new(0.4, 0.9), dir(0.9, 5.1)).unwrap();
    let w2 = PlaneWave::new(Complex64::new(-1.1, 0.2), dir(2.6, 1.8)).unwrap();
    let render_scene = |waves: Vec<PlaneWave>| {
        let scene = PlaneWaveScene::new(waves).unwrap();
        let field = scene_field_coefficients(&scene, &sys, n_max, &frequencies).unwrap();
        render(&field, &hrtf).unwrap()
    };
    let both = render_scene(vec![w1, w2]);
    let first = render_scene(vec![w1]);
    let second = render_scene(vec![w2]);
    for ear in Ear::BOTH {
        let sum = first.ear(ear)[0] + second.ear(ear)[0];
        assert!((both.ear(ear)[0] - sum).norm() < 1e-12);
    }
}

#[test]
fn density_quadrature_reproduces_rendering_outside_the_crate() {
    let n_max = 3u32;
    let grid = make_gauss_grid(n_max).unwrap();
    let frequencies = [1500.0];
    let synthetic = synth_hrtf(7, n_max, &frequencies, &grid).unwrap();
    let sys = row(1);
    let scene = two_wave_scene();
    let field = scene_field_coefficients(&scene, &sys, n_max, &frequencies).unwrap();
    let hrtf = encode_hrtf_for_convention(&synthetic.set, &grid, &sys, n_max).unwrap();
    let rendered = render(&field, &hrtf).unwrap();
    let density = plane_wave_density(&field).unwrap();
    let via_quadrature = integrate_sphere(
        |d| density.synthesize(0, d).unwrap() * hrtf.right.synthesize(0, d).unwrap(),
        &grid,
    );
    assert!((via_quadrature - rendered.ear(Ear::Right)[0]).norm() < 1e-10);
}

#[test]
fn conversion_round_trips_preserve_coefficients() {
    let scene = two_wave_scene();
    let frequencies = [640.0, 1280.0];
    for src in 1..=5u8 {
        let field = scene_field_coefficients(&scene, &row(src), 4, &frequencies).unwrap();
        for tgt in 1..=5u8 {
            let there = convert_convention(&field, &row(tgt)).unwrap();
            let back = convert_convention(&there, &row(src)).unwrap();
            for bin in 0..frequencies.len() {
                for (a, b) in field.bin(bin).iter().zip(back.bin(bin)) {
                    assert!((a - b).norm() < 1e-12, "{src}->{tgt}->{src}");
                }
            }
        }
    }
}

#[test]
fn guard_rails_refuse_wrong_setups() {
    let scene = two_wave_scene();
    let sphere = SphereSpec::new(0.05, 343.0).unwrap();
    let coarse = make_gauss_grid(1).unwrap();
    // kR = 3.3 cannot be resolved by a grid that is exact only to order 1.
    assert!(matches!(
        simulate_surface_pressure(&scene, &sphere, &coarse, &row(2), &[3600.0]),
        Err(SphereError::GridTooCoarse { .. })
    ));
    // Mixing transform signs between recording and encoding is refused.
    let grid = make_gauss_grid(6).unwrap();
    let pressure =
        simulate_surface_pressure(&scene, &sphere, &grid, &row(2), &[1000.0]).unwrap();
    assert!(matches!(
        sma_encode(&pressure, &row(5), 2, &RadialFilterSpec::default()),
        Err(SphereError::TransformSignMismatch)
    ));
    // Defects only exist under the rows whose formulas contain the factor.
    let field = scene_field_coefficients(&scene, &row(4), 2, &[1000.0]).unwrap();
    assert!(simulate_missing_sign_defect(&field, RenderDefect::SwapIPowers).is_err());
    assert!(simulate_missing_sign_defect(&field, RenderDefect::DropMinusOneM).is_err());
    // A non-square sample count cannot be an expansion.
    assert!(sphaural::sh::order_from_len(12).is_none());
}

#[test]
fn quadrature_grids_integrate_band_limited_products_exactly() {
    // Spot check beyond the acceptance sweep: integrate a product of two
    // specific harmonics picked to land on the exactness boundary.
    let grid = make_gauss_grid(9).unwrap();
    let f = |d: Direction| {
        sphaural::sh::sh_eval(ShFlavor::ComplexWilliams, 9, -7, d).unwrap()
            * sphaural::sh::sh_eval(ShFlavor::ComplexWilliams, 9, -7, d).unwrap().conj()
    };
    let got = integrate_sphere(f, &grid);
    assert!((got - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    assert!((grid.weight_sum() - 4.0 * PI).abs() < 1e-10);
}
