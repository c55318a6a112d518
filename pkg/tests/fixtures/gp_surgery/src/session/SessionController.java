package surgery.session;

public class SessionController {
    private SessionModel model = new SessionModel();

    public void login(String user, String password) {
        if (model.login(user, password)) {
            new SessionViewRoles(this).show();
        }
    }

    public void select(String role) {
        model.activateRole(role);
    }

    public void logout() {
        model.logout();
    }
}
