//! Shipped configurations: benchmark cases with closed-form references and parameter sweeps.

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub text: &'static str,
}

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "table1-gaussian",
        description: "N(0,1) loss at alpha 0.99, all four benchmark algorithms against the closed form",
        text: "\
model = gaussian
model.mu = 0
model.sigma = 1
loss = direct
alphas = 0.99
algorithms = alg1, alg2, alg3-fft, alg3-frft
bracket = 0, 3
grid.n_fft = 4096
grid.n_frft = 1024
grid.upper = 100
grid.x1 = 0
grid.gamma = 0.004
oracle = true
",
    },
    Preset {
        name: "table1-binomial",
        description: "Bin(5, 0.1) loss at alpha 0.99 against the discrete brute force",
        text: "\
model = binomial
model.n = 5
model.p = 0.1
loss = direct
alphas = 0.99
algorithms = alg2, alg3-fft, alg3-frft
bracket = 0, 5
grid.n_fft = 4096
grid.n_frft = 1024
grid.upper = 200
grid.x1 = 0
grid.gamma = 0.004
oracle = true
",
    },
    Preset {
        name: "table2-row1",
        description: "Exponential loss of a lognormal position, mu 0, sigma 0.2, T 0.25",
        text: "\
model = lognormal
model.mu = 0
model.sigma = 0.2
loss = exponential
v0 = 100
r = 0
t = 0.25
alphas = 0.99
algorithms = alg1, alg2, alg3-fft, alg3-frft
bracket = 0, 100
grid.n_fft = 4096
grid.n_frft = 1024
grid.upper = 100
grid.gamma = 6.7e-4
oracle = true
",
    },
    Preset {
        name: "table2-row2",
        description: "Exponential loss of a lognormal position, mu -0.8, sigma 0.35, T 1/12",
        text: "\
model = lognormal
model.mu = -0.8
model.sigma = 0.35
loss = exponential
v0 = 100
r = 0
t = 1/12
alphas = 0.99
algorithms = alg1, alg2, alg3-fft, alg3-frft
bracket = 0, 100
grid.n_fft = 4096
grid.n_frft = 1024
grid.upper = 100
grid.gamma = 6.7e-4
oracle = true
",
    },
    Preset {
        name: "fig-mjd",
        description: "Merton jump diffusion, sweep of the diffusion volatility",
        text: "\
model = merton
model.mu = 0
model.sigma = 0.25
model.lambda = 1
model.a = -0.01
model.b = 0.1
loss = exponential
v0 = 100
r = 0
t = 1/12
alphas = 0.9, 0.95, 0.99
algorithms = hybrid
sweep.param = model.sigma
sweep.from = 0.1
sweep.to = 0.5
sweep.steps = 9
",
    },
    Preset {
        name: "fig-vg",
        description: "Variance gamma, sweep of sigma",
        text: "\
model = vg
model.theta = 0
model.sigma = 0.3
model.nu = 0.1
loss = exponential
v0 = 100
r = 0
t = 1/12
alphas = 0.9, 0.95, 0.99
algorithms = hybrid
sweep.param = model.sigma
sweep.from = 0.1
sweep.to = 0.5
sweep.steps = 9
",
    },
    Preset {
        name: "fig-rs",
        description: "Two-state regime-switching GBM, sweep of the volatility gap sigma2 - sigma1",
        text: "\
model = rsjd
model.mu1 = 0
model.sigma1 = 0.1
model.mu2 = -0.1
model.dsigma = 0.2
model.q12 = 0.5
model.q21 = 0.5
model.initial = 1
loss = exponential
v0 = 100
r = 0
t = 1/12
alphas = 0.9, 0.95, 0.99
algorithms = hybrid
sweep.param = model.dsigma
sweep.from = 0
sweep.to = 0.4
sweep.steps = 9
",
    },
    Preset {
        name: "fig-rsjd",
        description: "Two-state regime-switching jump diffusion, sweep of the regime-2 mean jump",
        text: "\
model = rsjd
model.mu1 = 0
model.sigma1 = 0.25
model.lambda1 = 1
model.a1 = 0.1
model.b1 = 0.1
model.mu2 = 0
model.sigma2 = 0.25
model.lambda2 = 1
model.a2 = -0.1
model.b2 = 0.1
model.q12 = 0.5
model.q21 = 0.5
model.initial = 1
loss = exponential
v0 = 100
r = 0
t = 1/12
alphas = 0.9, 0.95, 0.99
algorithms = hybrid
sweep.param = model.a2
sweep.from = -0.3
sweep.to = 0.1
sweep.steps = 9
",
    },
    Preset {
        name: "fig-heston",
        description: "Heston stochastic volatility started at the long-run variance, sweep of rho",
        text: "\
model = heston
model.mu = 0
model.v0 = 0.1
model.kappa = 1
model.theta = 0.1
model.sigma_v = 0.3
model.rho = -0.9
loss = exponential
v0 = 100
r = 0
t = 1/12
alphas = 0.9, 0.95, 0.99
algorithms = hybrid
sweep.param = model.rho
sweep.from = -0.9
sweep.to = 0
sweep.steps = 10
",
    },
];
