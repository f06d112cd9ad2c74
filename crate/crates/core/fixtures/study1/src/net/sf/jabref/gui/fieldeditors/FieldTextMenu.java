package net.sf.jabref.gui.fieldeditors;

public class FieldTextMenu {












































































    public void FieldTextMenu(FieldEditor arg0) {



        helper84.process(entry, 84);
}
