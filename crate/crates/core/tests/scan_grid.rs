use filippov_core::equilibria::interior_equilibria;
use filippov_core::integrator::SimOptions;
use filippov_core::scan::{
    compute_basins, existence_boundary_p, scan_m_sweep, scan_sp_plane, BasinLabel,
};
use filippov_core::{ModelParams, Placement, PsiMode};

#[test]
fn sp_scan_is_deterministic() {
    let base = ModelParams::preset_a2();
    let a = scan_sp_plane(&base, (0.5, 8.5), (0.05, 0.5), (40, 30)).unwrap();
    let b = scan_sp_plane(&base, (0.5, 8.5), (0.05, 0.5), (40, 30)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.cells.len(), 40 * 30);
}

#[test]
fn placement_flips_once_per_row() {
    let base = ModelParams::preset_a1();
    let grid = scan_sp_plane(&base, (0.02, 1.9), (0.05, 0.66), (60, 25)).unwrap();
    for j in 0..grid.y_axis.count {
        let p = grid.y_axis.value(j);
        for mode in PsiMode::ALL {
            let at_p = base.with("p", p).unwrap();
            let x_star = interior_equilibria(&at_p, mode).records[0].location.x;
            let placements: Vec<Placement> = (0..grid.x_axis.count)
                .map(|i| grid.cell(i, j).mode(mode).placement().unwrap())
                .collect();
            let flips = placements.windows(2).filter(|w| w[0] != w[1]).count();
            assert!(flips <= 1, "row p={p}: {placements:?}");
            for (i, pl) in placements.iter().enumerate() {
                let s = grid.x_axis.value(i);
                let regular = match mode {
                    PsiMode::NonHarvest => x_star < s,
                    PsiMode::Harvest => x_star > s,
                };
                assert_eq!(*pl == Placement::Regular, regular, "p={p} S={s} {mode:?}");
            }
        }
    }
}

#[test]
fn a2_bistable_cell_has_unstable_pseudo_equilibrium() {
    let grid = scan_sp_plane(&ModelParams::preset_a2(), (3.9, 4.1), (0.19, 0.21), (3, 3)).unwrap();
    let c = grid.cell(1, 1);
    assert_eq!(c.non_harvest.placement(), Some(Placement::Regular));
    assert_eq!(c.harvest.placement(), Some(Placement::Regular));
    assert_eq!(
        c.pseudo,
        filippov_core::PseudoStatus::Present(filippov_core::Stability::Unstable)
    );
}

#[test]
fn single_m_sweep_equals_plane_scan() {
    let base = ModelParams::preset_a1();
    let sweep = scan_m_sweep(&base, &[0.2], (0.05, 1.5), (0.05, 1.0), (20, 20)).unwrap();
    let plane = scan_sp_plane(&base, (0.05, 1.5), (0.05, 1.0), (20, 20)).unwrap();
    assert_eq!(sweep[0].grid, plane);
    let nh = existence_boundary_p(&base, PsiMode::NonHarvest).unwrap();
    assert_eq!(sweep[0].existence_p[0], Some(nh));
}

#[test]
fn basin_labels_stable_under_tighter_tolerances() {
    let base = ModelParams::preset_a2();
    let sim = SimOptions::default();
    let coarse = compute_basins(&base, (0.0, 9.0), (0.0, 8.4), (12, 12), &sim).unwrap();
    let fine = compute_basins(
        &base,
        (0.0, 9.0),
        (0.0, 8.4),
        (12, 12),
        &sim.scaled_tolerances(0.5),
    )
    .unwrap();
    let nx = coarse.x_axis.count;
    for k in 0..coarse.cells.len() {
        if coarse.cells[k] == fine.cells[k] {
            continue;
        }
        // Allowed only next to a label change.
        let (i, j) = (k % nx, k / nx);
        let neighbours = [
            (i.wrapping_sub(1), j),
            (i + 1, j),
            (i, j.wrapping_sub(1)),
            (i, j + 1),
        ];
        let near_edge = neighbours
            .iter()
            .filter(|(a, b)| *a < nx && *b < coarse.y_axis.count)
            .any(|&(a, b)| *coarse.cell(a, b) != coarse.cells[k]);
        assert!(
            near_edge,
            "cell ({i}, {j}) changed label away from a basin boundary"
        );
    }
    assert!(coarse.cells.contains(&BasinLabel::Er1) && coarse.cells.contains(&BasinLabel::Er2));
}
