package surgery.view.nhsdoctor;

import surgery.controller.NHSDoctorController;

public class NHSDoctorViewMain {
    private NHSDoctorController controller;

    public NHSDoctorViewMain(NHSDoctorController controller) {
        this.controller = controller;
    }

    public void show() {
        System.out.println(controller.greet());
    }
}
