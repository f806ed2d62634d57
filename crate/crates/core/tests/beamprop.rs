use slowlight_core::beamprop::{
    centroid_and_angle, deflection_record, deflection_spectrum, gaussian_input, propagate_cell,
    sign_reversals, spectrum_detunings, BeamSetup, Grid,
};
use slowlight_core::fields::FieldMap;
use slowlight_core::medium::{calibrate_to_vg, MediumParams};
use slowlight_core::polariton::{from_coupling, sg_deflection};

fn lossless(v_g: f64) -> MediumParams {
    let base = MediumParams {
        gamma_c: 0.0,
        ..MediumParams::default()
    };
    calibrate_to_vg(&base, v_g).unwrap()
}

#[test]
fn homogeneous_lossless_cell_only_diffracts() {
    let medium = lossless(300.0);
    let beam = BeamSetup::new(50e-6, 1.0, &medium).unwrap();
    let fmap = FieldMap {
        grad_x: 0.0,
        ..FieldMap::default()
    };
    let record = deflection_record(&medium, &fmap, &beam, 0.0).unwrap();
    assert!(record.centroid_exit.abs() < 1e-15);
    assert!(record.angle.abs() < 1e-12);
    assert!(
        (record.transmission - 1.0).abs() < 1e-6,
        "{}",
        record.transmission
    );
}

#[test]
fn narrow_beam_matches_particle_picture() {
    let medium = lossless(290.0);
    let beam = BeamSetup::new(50e-6, 1.0, &medium).unwrap();
    let fmap = FieldMap::default();
    let wave = deflection_record(&medium, &fmap, &beam, 0.0).unwrap().angle;
    let ps = from_coupling(
        medium.rabi_control,
        medium.coupling_collective,
        medium.g_factor,
    )
    .unwrap();
    let particle =
        sg_deflection(&ps, medium.cell_length, fmap.grad_x, medium.wavenumber()).unwrap();
    assert!(
        (wave - particle).abs() < 0.05 * particle,
        "{wave:e} vs {particle:e}"
    );
    // near the quoted 2e-5 rad
    assert!((wave - 1.7e-5).abs() < 0.1 * 1.7e-5, "{wave:e}");
}

#[test]
fn reversed_gradient_negates_deflection() {
    let medium = calibrate_to_vg(&MediumParams::default(), 290.0).unwrap();
    let beam = BeamSetup::new(200e-6, 1.0, &medium).unwrap();
    let fmap = FieldMap::default();
    for delta in [0.0, 0.2 * medium.eit_window(), -1.5 * medium.eit_window()] {
        let forward = deflection_record(&medium, &fmap, &beam, delta).unwrap();
        let backward = deflection_record(&medium, &fmap.reversed(), &beam, delta).unwrap();
        assert!(
            (forward.angle + backward.angle).abs() <= 1e-9 * forward.angle.abs(),
            "{forward:?} {backward:?}"
        );
        assert!(
            (forward.centroid_exit + backward.centroid_exit).abs()
                <= 1e-9 * forward.centroid_exit.abs() + 1e-18
        );
    }
}

#[test]
fn no_gradient_no_deflection_anywhere() {
    let medium = calibrate_to_vg(&MediumParams::default(), 290.0).unwrap();
    let beam = BeamSetup::new(1e-3, 1.0, &medium).unwrap();
    let fmap = FieldMap {
        grad_x: 0.0,
        ..FieldMap::default()
    };
    let deltas = spectrum_detunings(&medium, 3.0, 13);
    for record in deflection_spectrum(&medium, &fmap, &beam, &deltas).unwrap() {
        assert!(record.angle.abs() < 1e-9, "{record:?}");
    }
}

#[test]
fn angle_insensitive_to_window_size() {
    let medium = lossless(300.0);
    let waist = 50e-6;
    let grid = Grid::for_beam(waist, medium.lambda_s, medium.cell_length).unwrap();
    let wide = Grid::new(2 * grid.len(), grid.spacing()).unwrap();
    let angle = |grid: Grid| {
        let entry = gaussian_input(waist, 1.0, grid, medium.lambda_s).unwrap();
        let exit = propagate_cell(&entry, &medium, &FieldMap::default(), 0.0, 256).unwrap();
        centroid_and_angle(&entry, &exit).unwrap().1
    };
    let (a, b) = (angle(grid), angle(wide));
    assert!((a - b).abs() < 1e-9 * a.abs(), "{a:e} vs {b:e}");
}

#[test]
fn camera_displacement_uses_lever_arm() {
    let medium = calibrate_to_vg(&MediumParams::default(), 290.0).unwrap();
    let mut beam = BeamSetup::new(1e-3, 1.0, &medium).unwrap();
    beam.camera_distance = 3.0;
    let r = deflection_record(&medium, &FieldMap::default(), &beam, 0.0).unwrap();
    assert_eq!(r.camera_displacement, r.centroid_exit + 3.0 * r.angle);
}

#[test]
fn spectrum_lineshape() {
    let medium = calibrate_to_vg(&MediumParams::default(), 290.0).unwrap();
    let beam = BeamSetup::new(1e-3, 1.0, &medium).unwrap();
    let deltas = spectrum_detunings(&medium, 3.0, 61);
    let spectrum = deflection_spectrum(&medium, &FieldMap::default(), &beam, &deltas).unwrap();
    let angles: Vec<f64> = spectrum.iter().map(|r| r.angle).collect();
    let peak = angles.iter().fold(0.0f64, |m, a| m.max(a.abs()));

    // central extremum
    assert_eq!(peak, angles[30].abs());
    assert_eq!(sign_reversals(&angles, 0.0), 2);
    // even in δ, relative to the spectrum's scale
    for (a, b) in angles.iter().zip(angles.iter().rev()) {
        assert!((a - b).abs() <= 0.01 * peak, "{a:e} vs {b:e}");
    }
    // transparency peak on resonance
    let best = spectrum
        .iter()
        .max_by(|a, b| a.transmission.total_cmp(&b.transmission))
        .unwrap();
    assert_eq!(best.delta_laser, 0.0);
    assert!(spectrum
        .iter()
        .all(|r| (0.0..=1.0).contains(&r.transmission)));
}

#[test]
fn narrow_spectrum_range_rejected() {
    let medium = MediumParams::default();
    let beam = BeamSetup::new(1e-3, 1.0, &medium).unwrap();
    let deltas = spectrum_detunings(&medium, 1.0, 11);
    assert!(deflection_spectrum(&medium, &FieldMap::default(), &beam, &deltas).is_err());
}

#[test]
fn deflection_grows_with_inverse_group_velocity() {
    let mut last = 0.0;
    for v_g in [1200.0, 600.0, 300.0, 150.0] {
        let medium = lossless(v_g);
        let beam = BeamSetup::new(50e-6, 1.0, &medium).unwrap();
        let angle = deflection_record(&medium, &FieldMap::default(), &beam, 0.0)
            .unwrap()
            .angle;
        assert!(angle > last);
        last = angle;
    }
}
