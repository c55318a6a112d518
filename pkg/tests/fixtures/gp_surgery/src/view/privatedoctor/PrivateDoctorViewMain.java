package surgery.view.privatedoctor;

import surgery.controller.PrivateDoctorController;

public class PrivateDoctorViewMain {
    private PrivateDoctorController controller;

    public PrivateDoctorViewMain(PrivateDoctorController controller) {
        this.controller = controller;
    }

    public void show() {
        String text = controller.greet("bob");
        System.out.println(text);
    }
}
